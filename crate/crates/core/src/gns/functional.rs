//! Positive functionals on star algebras.

use std::collections::BTreeSet;
use std::fmt;

use super::support::SupportDescriptor;
use crate::coeffs::{ChartKind, Frame, GaussPoly, Observable};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, Value, DEFAULT_EPS};
use crate::series::LambdaSeries;
use crate::star::{star_exp_rational, Product, StarAlgebra};

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalKind<C> {
    /// Evaluation at `z = point` on one component of a Wick chart.
    DeltaPoint { component: usize, point: Vec<C> },
    /// `∫ f dq dp` over some components of a Moyal plane.
    Trace { components: BTreeSet<usize> },
    /// `tr(Exp(-βH) ⋆ f)`; `e` and `e_inv` cache `Exp(∓βH)`.
    Kms { h: Observable<C>, beta: Rational, e: Observable<C>, e_inv: Observable<C> },
    /// `∫ ι*f · exp(-c q²) dq` on a flat cotangent chart with the Weyl product.
    Schrodinger { components: BTreeSet<usize> },
    /// `Σ αᵢ ωᵢ` with positive λ-scalars and disjoint supports.
    Convex(Vec<(LambdaSeries<C>, PositiveFunctional<C>)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositiveFunctional<C> {
    alg: StarAlgebra,
    kind: FunctionalKind<C>,
}

fn all_components(alg: &StarAlgebra) -> BTreeSet<usize> {
    (0..alg.chart().components).collect()
}

fn check_components(alg: &StarAlgebra, comps: &BTreeSet<usize>) -> Result<()> {
    let m = alg.chart().components;
    match comps.iter().find(|&&c| c >= m) {
        Some(c) => Err(Error::Invalid(format!("component {} out of range 1..={m}", c + 1))),
        None if comps.is_empty() => Err(Error::Invalid("functional on no components".into())),
        None => Ok(()),
    }
}

impl<C: Scalar> PositiveFunctional<C> {
    /// `δ_p` on component `component` of a Wick algebra.
    pub fn delta(alg: &StarAlgebra, component: usize, point: Vec<C>) -> Result<Self> {
        if alg.product() != Product::Wick {
            return Err(Error::UnsupportedChart(format!("evaluation functional needs the Wick product, got {}", alg.product())));
        }
        if point.len() != alg.chart().n {
            return Err(Error::DimensionMismatch { expected: alg.chart().n, got: point.len() });
        }
        check_components(alg, &[component].into())?;
        Ok(PositiveFunctional { alg: alg.clone(), kind: FunctionalKind::DeltaPoint { component, point } })
    }

    /// `δ_0` on the first component.
    pub fn delta0(alg: &StarAlgebra) -> Result<Self> {
        Self::delta(alg, 0, vec![C::zero(); alg.chart().n])
    }

    pub fn trace(alg: &StarAlgebra) -> Result<Self> {
        Self::trace_on(alg, all_components(alg))
    }

    pub fn trace_on(alg: &StarAlgebra, components: BTreeSet<usize>) -> Result<Self> {
        if alg.product() != Product::Moyal {
            return Err(Error::UnsupportedChart(format!("trace needs the Moyal product, got {}", alg.product())));
        }
        check_components(alg, &components)?;
        Ok(PositiveFunctional { alg: alg.clone(), kind: FunctionalKind::Trace { components } })
    }

    /// KMS functional at inverse temperature `beta` for a real `h` of order
    /// at least one.
    pub fn kms(alg: &StarAlgebra, h: &Observable<C>, beta: Rational) -> Result<Self> {
        if alg.product() != Product::Moyal {
            return Err(Error::UnsupportedChart(format!("KMS functional needs the Moyal product, got {}", alg.product())));
        }
        if !h.is_real() {
            return Err(Error::Invalid("KMS Hamiltonian must be real".into()));
        }
        match h.order().finite() {
            Some(o) if o < 1 => return Err(Error::OrderTooLow(format!("o(H) = {o}, KMS needs >= 1"))),
            _ => {}
        }
        let e = star_exp_rational(alg, h, &-beta.clone())?;
        let e_inv = star_exp_rational(alg, h, &beta)?;
        Ok(PositiveFunctional { alg: alg.clone(), kind: FunctionalKind::Kms { h: h.clone(), beta, e, e_inv } })
    }

    pub fn schrodinger(alg: &StarAlgebra) -> Result<Self> {
        Self::schrodinger_on(alg, all_components(alg))
    }

    pub fn schrodinger_on(alg: &StarAlgebra, components: BTreeSet<usize>) -> Result<Self> {
        if alg.product() != Product::Weyl {
            return Err(Error::UnsupportedChart(format!(
                "Schrödinger functional needs the Weyl product, got {}",
                alg.product()
            )));
        }
        check_components(alg, &components)?;
        Ok(PositiveFunctional { alg: alg.clone(), kind: FunctionalKind::Schrodinger { components } })
    }

    /// `Σ αᵢ ωᵢ`; the summands must share an algebra and have pairwise
    /// disjoint component supports, and every `αᵢ` must be positive.
    pub fn convex(terms: Vec<(LambdaSeries<C>, PositiveFunctional<C>)>) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::Invalid("empty convex combination".into()))?;
        let alg = first.alg.clone();
        let m = alg.chart().components;
        let mut seen = BTreeSet::new();
        for (alpha, w) in &terms {
            if w.alg != alg {
                return Err(Error::AlgebraMismatch);
            }
            if alpha.conj() != *alpha || alpha.to_values().re_sign(DEFAULT_EPS) <= 0 {
                return Err(Error::Invalid("convex weights must be real and positive".into()));
            }
            for c in w.support().components(m) {
                if !seen.insert(c) {
                    return Err(Error::OverlappingSupports(c));
                }
            }
        }
        Ok(PositiveFunctional { alg, kind: FunctionalKind::Convex(terms) })
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.alg
    }

    pub fn kind(&self) -> &FunctionalKind<C> {
        &self.kind
    }

    pub fn eval(&self, f: &Observable<C>) -> Result<LambdaSeries<Value>> {
        if f.chart() != self.alg.chart() {
            return Err(Error::ChartMismatch(format!("{} vs {}", f.chart(), self.alg.chart())));
        }
        if f.trunc() != self.alg.trunc() {
            return Err(Error::AlgebraMismatch);
        }
        match &self.kind {
            FunctionalKind::DeltaPoint { component, point } => {
                let full: Vec<C> = point.iter().cloned().chain(point.iter().map(|c| c.conj())).collect();
                f.evaluate(*component, &full)
            }
            FunctionalKind::Trace { components } => f.integrate(components),
            FunctionalKind::Kms { e, .. } => self.alg.mul(e, f)?.integrate(&all_components(&self.alg)),
            FunctionalKind::Schrodinger { components } => {
                let u = iota_star(f);
                let mu = density(&self.alg);
                let mut out = LambdaSeries::zero(f.trunc());
                for &k in components {
                    for (e, g) in u.part(k).terms() {
                        out.add_term(e, g.mul(&mu).integrate()?);
                    }
                }
                Ok(out)
            }
            FunctionalKind::Convex(terms) => {
                let mut out = LambdaSeries::zero(f.trunc());
                for (alpha, w) in terms {
                    out = &out + &(&alpha.to_values() * &w.eval(f)?);
                }
                Ok(out)
            }
        }
    }

    /// `ω(conj(f) ⋆ g)`.
    pub fn pairing(&self, f: &Observable<C>, g: &Observable<C>) -> Result<LambdaSeries<Value>> {
        self.eval(&self.alg.mul(&f.conj(), g)?)
    }

    /// `ω(conj(f) ⋆ f) ≥ 0` with vanishing imaginary part.
    pub fn positivity_check(&self, f: &Observable<C>, eps: f64) -> Result<bool> {
        let v = self.pairing(f, f)?;
        let im_zero = v.terms().all(|(_, c)| c.im().is_negligible(eps));
        Ok(im_zero && v.map(|c| c.re()).re_sign(eps) >= 0)
    }

    pub fn support(&self) -> SupportDescriptor {
        let m = self.alg.chart().components;
        match &self.kind {
            FunctionalKind::DeltaPoint { component, point } => SupportDescriptor::Point {
                component: *component,
                coords: point.iter().map(|c| format!("{}", c.to_value())).collect(),
            },
            FunctionalKind::Trace { components } => SupportDescriptor::Components(components.clone()).normalize(m),
            FunctionalKind::Kms { .. } => SupportDescriptor::Full,
            FunctionalKind::Schrodinger { components } => SupportDescriptor::ZeroSection(components.clone()).normalize(m),
            FunctionalKind::Convex(terms) => terms
                .iter()
                .fold(SupportDescriptor::Empty, |acc, (_, w)| acc.join(&w.support(), m)),
        }
    }

    /// Evaluate on the restriction of `f` to the support components, the
    /// unique extension that vanishes off the support.
    pub fn extend(&self, f: &Observable<C>) -> Result<LambdaSeries<Value>> {
        let comps = self.support().components(self.alg.chart().components);
        self.eval(&f.restrict(&comps))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FunctionalKind::DeltaPoint { .. } => "delta".into(),
            FunctionalKind::Trace { .. } => "trace".into(),
            FunctionalKind::Kms { beta, .. } => format!("kms(beta={beta})"),
            FunctionalKind::Schrodinger { .. } => "schrodinger".into(),
            FunctionalKind::Convex(t) => {
                format!("convex({})", t.iter().map(|(_, w)| w.name()).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

impl<C: Scalar> fmt::Display for PositiveFunctional<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Pull back to the zero section `p = 0` of a cotangent chart.
pub fn iota_star<C: Scalar>(f: &Observable<C>) -> Observable<C> {
    let chart = f.chart();
    let n = chart.n;
    let keep: Vec<usize> = (0..n).map(|k| chart.q(k)).collect();
    let target = chart.config_chart();
    let frame = Frame::real(n);
    let parts = f.parts().iter().map(|p| p.map(|g| g.restrict(&keep, frame))).collect();
    Observable::from_parts(&target, f.trunc(), parts).expect("same component count")
}

/// Reference density `exp(-c q²)` on the configuration space.
pub(crate) fn density<C: Scalar>(alg: &StarAlgebra) -> GaussPoly<C> {
    let frame = Frame::real(alg.chart().n);
    match alg.chart().kind {
        ChartKind::CotangentFlat(_) => GaussPoly::gauss(frame, alg.chart().density_c()),
        _ => GaussPoly::one(frame),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Chart, Density};
    use crate::scalar::{cq_int, int, Cq};

    type O = Observable<Cq>;

    #[test]
    fn trace_of_gaussian_is_pi() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
        let tr = PositiveFunctional::trace(&alg).unwrap();
        let v = tr.eval(&O::gauss(alg.chart(), 4, int(1))).unwrap();
        assert_eq!(v.coeff(0), Some(&Value::pi()));
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn delta_of_wick_product() {
        let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, 4).unwrap();
        let d = PositiveFunctional::<Cq>::delta0(&alg).unwrap();
        let f = alg.mul(&alg.var("z1").unwrap(), &alg.var("zbar1").unwrap()).unwrap();
        let v = d.eval(&f).unwrap();
        assert_eq!(v, LambdaSeries::monomial(1, Value::exact(cq_int(2), 0), 4));
        assert!(d.positivity_check(&alg.var("zbar1").unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn kms_at_zero_is_trace() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
        let h: O = (&alg.var::<Cq>("q1").unwrap() * &alg.var("q1").unwrap()).shift(1);
        let kms = PositiveFunctional::kms(&alg, &h, int(0)).unwrap();
        let tr = PositiveFunctional::trace(&alg).unwrap();
        let f = &O::gauss(alg.chart(), 4, int(1)) * &alg.var("p1").unwrap();
        let f = &f * &alg.var("p1").unwrap();
        assert_eq!(kms.eval(&f).unwrap(), tr.eval(&f).unwrap());
        assert!(matches!(PositiveFunctional::kms(&alg, &h.shift(-1), int(1)), Err(Error::OrderTooLow(_))));
    }

    #[test]
    fn convex_supports() {
        let chart = Chart::moyal(1).with_components(2);
        let alg = StarAlgebra::new(chart, Product::Moyal, 4).unwrap();
        let one = LambdaSeries::one(4);
        let t1 = PositiveFunctional::<Cq>::trace_on(&alg, [0].into()).unwrap();
        let t2 = PositiveFunctional::<Cq>::trace_on(&alg, [1].into()).unwrap();
        let w = PositiveFunctional::convex(vec![(one.clone(), t1.clone()), (one.clone(), t2)]).unwrap();
        assert_eq!(w.support(), SupportDescriptor::Full);
        assert!(matches!(
            PositiveFunctional::convex(vec![(one.clone(), t1.clone()), (one, t1)]),
            Err(Error::OverlappingSupports(0))
        ));
    }

    #[test]
    fn schrodinger_pullback() {
        let chart = Chart::cotangent(1, Density::Gaussian(int(1)));
        let alg = StarAlgebra::new(chart, Product::Weyl, 4).unwrap();
        let w = PositiveFunctional::<Cq>::schrodinger(&alg).unwrap();
        let v = w.eval(&alg.var("p1").unwrap()).unwrap();
        assert!(v.is_zero());
        let v = w.eval(&alg.one()).unwrap();
        let root_pi = std::f64::consts::PI.sqrt();
        assert!((v.coeff(0).unwrap().to_cf().re - root_pi).abs() < 1e-12);
    }
}
