//! GNS spaces in reduced form.
//!
//! Vectors are observables on a model chart with the same component count as
//! the algebra, vanishing off the support of the functional:
//!
//! * trace and KMS functionals are faithful on their support, so vectors are
//!   representatives on the algebra chart;
//! * evaluation functionals use the Bargmann-Fock model, polynomials in
//!   `ȳ` with `u_α = ∂^α_{z̄} f(p) / α!`;
//! * the Schrödinger functional uses wave functions `ι*Nf` on the
//!   configuration space.

use std::collections::{BTreeMap, BTreeSet};

use super::functional::{density, iota_star, FunctionalKind, PositiveFunctional};
use super::support::SupportDescriptor;
use crate::coeffs::{monomials_up_to, Chart, GaussPoly, Mono, Observable, Poly};
use crate::error::{Error, Result};
use crate::scalar::{int, Scalar, Value};
use crate::series::{LambdaSeries, Order};
use crate::star::{n_operator, Direction, StarAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Faithful,
    Fock,
    Schrodinger,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Faithful => "faithful",
            ModelKind::Fock => "fock",
            ModelKind::Schrodinger => "schrodinger",
        }
    }
}

/// A GNS space of a positive functional in reduced form.
#[derive(Clone, Debug)]
pub struct Gns<C> {
    omega: PositiveFunctional<C>,
    kind: ModelKind,
    support: BTreeSet<usize>,
    weights: Vec<LambdaSeries<C>>,
    points: BTreeMap<usize, Vec<C>>,
    kms: Option<(Observable<C>, Observable<C>)>,
    vector_chart: Chart,
    bound: Option<u32>,
}

/// Outcome of a Gel'fand ideal test with its closed-form cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct GelfandReport {
    /// `ω(conj(f) ⋆ f)`.
    pub value: LambdaSeries<Value>,
    /// Whether the value vanishes on the window.
    pub member: bool,
    /// The model-level criterion on the window: every reduced coefficient
    /// contributes only beyond `λ^N`.
    pub closed_form: bool,
    /// Whether the reduced vector vanishes outright.
    pub reduced_vanishes: bool,
}

impl GelfandReport {
    pub fn consistent(&self) -> bool {
        self.member == self.closed_form
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaithfulnessReport {
    pub support_full: bool,
    pub basis_faithful: bool,
}

impl FaithfulnessReport {
    pub fn faithful(&self) -> bool {
        self.support_full && self.basis_faithful
    }
}

enum Leaf<C> {
    Delta(usize, Vec<C>),
    Trace(BTreeSet<usize>),
    Kms(Observable<C>, Observable<C>),
    Schrodinger(BTreeSet<usize>),
}

fn leaves<C: Scalar>(w: &PositiveFunctional<C>, alpha: &LambdaSeries<C>, out: &mut Vec<(LambdaSeries<C>, Leaf<C>)>) {
    match w.kind() {
        FunctionalKind::DeltaPoint { component, point } => out.push((alpha.clone(), Leaf::Delta(*component, point.clone()))),
        FunctionalKind::Trace { components } => out.push((alpha.clone(), Leaf::Trace(components.clone()))),
        FunctionalKind::Kms { e, e_inv, .. } => out.push((alpha.clone(), Leaf::Kms(e.clone(), e_inv.clone()))),
        FunctionalKind::Schrodinger { components } => out.push((alpha.clone(), Leaf::Schrodinger(components.clone()))),
        FunctionalKind::Convex(terms) => {
            for (a, v) in terms {
                leaves(v, &(alpha * a), out);
            }
        }
    }
}

impl<C: Scalar> Gns<C> {
    pub fn new(omega: &PositiveFunctional<C>) -> Result<Self> {
        let alg = omega.algebra();
        let chart = alg.chart().clone();
        let m = chart.components;
        let trunc = alg.trunc();
        let mut ls = Vec::new();
        leaves(omega, &LambdaSeries::one(trunc), &mut ls);
        let mut kind = None;
        let mut support = BTreeSet::new();
        let mut weights = vec![LambdaSeries::zero(trunc); m];
        let mut points = BTreeMap::new();
        let mut kms = None;
        for (alpha, leaf) in ls {
            let (k, comps) = match leaf {
                Leaf::Delta(c, p) => {
                    points.insert(c, p);
                    (ModelKind::Fock, [c].into())
                }
                Leaf::Trace(s) => (ModelKind::Faithful, s),
                Leaf::Kms(e, ei) => {
                    kms = Some((e, ei));
                    (ModelKind::Faithful, (0..m).collect())
                }
                Leaf::Schrodinger(s) => (ModelKind::Schrodinger, s),
            };
            if kind.is_some_and(|x| x != k) {
                return Err(Error::ModelMismatch("convex combination mixes GNS models".into()));
            }
            kind = Some(k);
            for c in comps {
                weights[c] = alpha.clone();
                support.insert(c);
            }
        }
        let kind = kind.expect("at least one leaf");
        let vector_chart = match kind {
            ModelKind::Faithful => chart.clone(),
            ModelKind::Fock => Chart::fock(chart.n).with_components(m),
            ModelKind::Schrodinger => chart.config_chart(),
        };
        Ok(Gns { omega: omega.clone(), kind, support, weights, points, kms, vector_chart, bound: None })
    }

    /// Truncate Bargmann-Fock vectors at total degree `d`.
    pub fn with_bound(mut self, d: u32) -> Self {
        self.bound = Some(d);
        self
    }

    /// The same space on a wider window.
    pub fn with_trunc(&self, trunc: i32) -> Result<Self> {
        let omega = self.omega.with_trunc(trunc)?;
        let mut out = Gns::new(&omega)?;
        out.bound = self.bound;
        Ok(out)
    }

    pub fn functional(&self) -> &PositiveFunctional<C> {
        &self.omega
    }

    pub fn algebra(&self) -> &StarAlgebra {
        self.omega.algebra()
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn support_components(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn vector_chart(&self) -> &Chart {
        &self.vector_chart
    }

    pub fn trunc(&self) -> i32 {
        self.algebra().trunc()
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    /// `Exp(-βH)` and `Exp(βH)` for KMS spaces.
    pub fn kms_factors(&self) -> Option<&(Observable<C>, Observable<C>)> {
        self.kms.as_ref()
    }

    /// Whether all support components carry the same weight.
    pub fn uniform_weights(&self) -> bool {
        let mut it = self.support.iter().map(|&c| &self.weights[c]);
        let first = it.next();
        it.all(|w| Some(w) == first)
    }

    fn check_vector(&self, u: &Observable<C>) -> Result<()> {
        if u.chart() != &self.vector_chart || u.trunc() != self.trunc() {
            return Err(Error::ModelMismatch(format!("vector on {} for a {} model", u.chart(), self.kind.name())));
        }
        Ok(())
    }

    fn check_observable(&self, f: &Observable<C>) -> Result<()> {
        if f.chart() != self.algebra().chart() || f.trunc() != self.trunc() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn zero_vector(&self) -> Observable<C> {
        Observable::zero(&self.vector_chart, self.trunc())
    }

    /// `ψ_f` in reduced form.
    pub fn reduce(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.check_observable(f)?;
        match self.kind {
            ModelKind::Faithful => Ok(f.restrict(&self.support)),
            ModelKind::Fock => self.fock_reduce(f),
            ModelKind::Schrodinger => Ok(iota_star(&n_operator(f, Direction::Forward)?).restrict(&self.support)),
        }
    }

    fn point_full(&self, c: usize) -> Vec<C> {
        let p = &self.points[&c];
        p.iter().cloned().chain(p.iter().map(|x| x.conj())).collect()
    }

    fn taylor_limit(&self, f: &Observable<C>) -> Result<u32> {
        match (self.bound, f.is_polynomial()) {
            (Some(d), _) => Ok(d),
            (None, true) => Ok(f.degree().unwrap_or(0)),
            (None, false) => Err(Error::Invalid("Bargmann-Fock vectors of Gaussian observables need a degree bound".into())),
        }
    }

    fn fock_reduce(&self, f: &Observable<C>) -> Result<Observable<C>> {
        let chart = self.algebra().chart();
        let n = chart.n;
        let limit = self.taylor_limit(f)?;
        let frame = self.vector_chart.frame();
        let mut parts = vec![LambdaSeries::zero(self.trunc()); chart.components];
        for &c in &self.support {
            let pt = self.point_full(c);
            let mut acc: LambdaSeries<GaussPoly<C>> = LambdaSeries::zero(self.trunc());
            for alpha in monomials_up_to(n, limit) {
                let dz = Mono::from_exps(&[vec![0u16; n], alpha.0.to_vec()].concat());
                let inv = C::one() / C::from_i64(alpha.factorial() as i64);
                for (e, g) in f.part(c).terms() {
                    let v = g.derive_multi(&dz).evaluate_in_field(&pt)?;
                    if !v.vanishes() {
                        acc.add_term(e, GaussPoly::from_poly(frame, Poly::term(alpha.clone(), v.mul_ref(&inv))));
                    }
                }
            }
            parts[c] = acc;
        }
        Observable::from_parts(&self.vector_chart, self.trunc(), parts)
    }

    /// `⟨u, v⟩` in the model; equals `ω(conj(f) ⋆ g)` for `u = ψ_f, v = ψ_g`.
    pub fn inner(&self, u: &Observable<C>, v: &Observable<C>) -> Result<LambdaSeries<Value>> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        let trunc = self.trunc();
        let mut out = LambdaSeries::zero(trunc);
        match self.kind {
            ModelKind::Faithful => {
                let alg = self.algebra();
                let mut x = alg.mul(&u.conj(), v)?;
                if let Some((e, _)) = &self.kms {
                    x = alg.mul(e, &x)?;
                }
                for &c in &self.support {
                    let part = x.integrate(&[c].into())?;
                    out = &out + &(&self.weights[c].to_values() * &part);
                }
            }
            ModelKind::Fock => {
                for &c in &self.support {
                    let mut part = LambdaSeries::zero(trunc);
                    for (e1, g1) in u.part(c).terms() {
                        for (e2, g2) in v.part(c).terms() {
                            let (p1, p2) = (g1.polynomial_part(), g2.polynomial_part());
                            for (alpha, a) in p1.terms() {
                                let Some(b) = p2.coeff(alpha) else { continue };
                                let k = alpha.degree() as i32;
                                let w = C::from_i64(alpha.factorial() as i64) * C::from_i64(1i64 << k);
                                part.add_term(e1 + e2 + k, a.conj().mul_ref(b).mul_ref(&w));
                            }
                        }
                    }
                    out = &out + &(&self.weights[c] * &part).to_values();
                }
            }
            ModelKind::Schrodinger => {
                let mu = density(self.algebra());
                for &c in &self.support {
                    let mut part = LambdaSeries::zero(trunc);
                    for (e1, g1) in u.part(c).terms() {
                        for (e2, g2) in v.part(c).terms() {
                            if e1 + e2 <= trunc {
                                part.add_term(e1 + e2, g1.conj().mul(g2).mul(&mu).integrate()?);
                            }
                        }
                    }
                    out = &out + &(&self.weights[c].to_values() * &part);
                }
            }
        }
        Ok(out)
    }

    /// `π(f) u` by the explicit model formula.
    pub fn left(&self, f: &Observable<C>, u: &Observable<C>) -> Result<Observable<C>> {
        self.check_observable(f)?;
        self.check_vector(u)?;
        match self.kind {
            ModelKind::Faithful => Ok(self.algebra().mul(f, u)?.restrict(&self.support)),
            ModelKind::Fock => self.bargmann_fock(f, u),
            ModelKind::Schrodinger => self.schrodinger_rep(f, u),
        }
    }

    /// `u ↦ u ⋆ f`, defined on the faithful models only.
    pub fn right(&self, f: &Observable<C>, u: &Observable<C>) -> Result<Observable<C>> {
        self.check_observable(f)?;
        self.check_vector(u)?;
        if self.kind != ModelKind::Faithful {
            return Err(Error::ModelMismatch(format!("right multiplication on the {} model", self.kind.name())));
        }
        Ok(self.algebra().mul(u, f)?.restrict(&self.support))
    }

    /// `π(f) ψ_g` through the quotient: `ψ_{f ⋆ g}`.
    pub fn left_via_quotient(&self, f: &Observable<C>, g: &Observable<C>) -> Result<Observable<C>> {
        self.reduce(&self.algebra().mul(f, g)?)
    }

    /// `π(f) u = Σ (2λ)^{|α|}/(α!β!) (∂_z^α ∂_{z̄}^β f)(p) ȳ^β ∂_ȳ^α u`.
    fn bargmann_fock(&self, f: &Observable<C>, u: &Observable<C>) -> Result<Observable<C>> {
        let chart = self.algebra().chart();
        let n = chart.n;
        let trunc = self.trunc();
        let du = u.degree().unwrap_or(0);
        let beta_limit = self.taylor_limit(f)?;
        let mut out = self.zero_vector();
        for &c in &self.support {
            let pt = self.point_full(c);
            let uc = u.restrict(&[c].into());
            let mut acc = self.zero_vector();
            for alpha in monomials_up_to(n, du.min(trunc.max(0) as u32)) {
                let du_alpha = uc.derive_multi(&alpha);
                if du_alpha.is_zero() {
                    continue;
                }
                let k = alpha.degree() as i32;
                for beta in monomials_up_to(n, beta_limit) {
                    let d = Mono::from_exps(&[alpha.0.to_vec(), beta.0.to_vec()].concat());
                    let fact = C::from_i64(1i64 << k) / C::from_i64((alpha.factorial() * beta.factorial()) as i64);
                    let mut coeff = LambdaSeries::zero(trunc);
                    for (e, g) in f.part(c).terms() {
                        let v = g.derive_multi(&d).evaluate_in_field(&pt)?;
                        if !v.vanishes() {
                            coeff.add_term(e + k, v.mul_ref(&fact));
                        }
                    }
                    if coeff.is_zero() {
                        continue;
                    }
                    let shifted = du_alpha.map_coeffs(|g| mul_mono(g, &beta));
                    acc = acc.checked_add(&shifted.scale_series(&coeff))?;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(match self.bound {
            Some(d) => truncate_degree(&out, d),
            None => out,
        })
    }

    /// `ϱ(f) u = Σ (λ/i)^{|α|}/α! ι*(∂_p^α Nf) ∂_q^α u`.
    fn schrodinger_rep(&self, f: &Observable<C>, u: &Observable<C>) -> Result<Observable<C>> {
        let chart = self.algebra().chart();
        let n = chart.n;
        let trunc = self.trunc();
        let nf = n_operator(f, Direction::Forward)?;
        let (Some(onf), Some(ou)) = (nf.order().finite(), u.order().finite()) else {
            return Ok(self.zero_vector());
        };
        let mut limit = trunc - onf - ou;
        if limit < 0 {
            return Ok(self.zero_vector());
        }
        if u.is_polynomial() {
            limit = limit.min(u.degree().unwrap_or(0) as i32);
        }
        let minus_i = -C::imag_unit();
        let mut out = self.zero_vector();
        for alpha in monomials_up_to(n, limit as u32) {
            let k = alpha.degree() as i32;
            let dp = Mono::from_exps(&[vec![0u16; n], alpha.0.to_vec()].concat());
            let coeff = iota_star(&nf.derive_multi(&dp));
            let du = u.derive_multi(&alpha);
            if coeff.is_zero() || du.is_zero() {
                continue;
            }
            let mut s = C::one() / C::from_i64(alpha.factorial() as i64);
            for _ in 0..k {
                s = s.mul_ref(&minus_i);
            }
            out = out.checked_add(&coeff.checked_pointwise(&du)?.shift(k).scale(&s))?;
        }
        Ok(out.restrict(&self.support))
    }

    /// Support of `ψ` as a descriptor of the model's kind.
    pub fn support_of_vector(&self, u: &Observable<C>) -> SupportDescriptor {
        let m = self.vector_chart.components;
        let comps: BTreeSet<usize> = u.support().intersection(&self.support).copied().collect();
        let d = match self.kind {
            ModelKind::Faithful => SupportDescriptor::Components(comps),
            ModelKind::Schrodinger => SupportDescriptor::ZeroSection(comps),
            ModelKind::Fock if comps.len() == 1 => {
                let c = *comps.iter().next().expect("one component");
                SupportDescriptor::Point {
                    component: c,
                    coords: self.points[&c].iter().map(|x| format!("{}", x.to_value())).collect(),
                }
            }
            ModelKind::Fock => SupportDescriptor::Components(comps),
        };
        d.normalize(m)
    }

    /// Gel'fand ideal membership with the model-level cross-check.
    pub fn gelfand(&self, f: &Observable<C>, eps: f64) -> Result<GelfandReport> {
        let value = self.omega.pairing(f, f)?;
        let member = value.is_negligible(eps);
        let u = self.reduce(f)?;
        let trunc = self.trunc();
        let closed_form = match self.kind {
            ModelKind::Fock => u.parts().iter().all(|part| {
                let mut lowest: BTreeMap<Mono, i32> = BTreeMap::new();
                for (e, g) in part.terms() {
                    for (m, _) in g.polynomial_part().terms() {
                        lowest.entry(m.clone()).or_insert(e);
                    }
                }
                lowest.iter().all(|(m, &o)| m.degree() as i32 + 2 * o > trunc)
            }),
            _ => match u.order() {
                Order::Infinity => true,
                Order::Finite(o) => 2 * o > trunc,
            },
        };
        Ok(GelfandReport { value, member, closed_form, reduced_vanishes: u.is_zero() })
    }

    /// Observables of degree at most `d` on single support components,
    /// times `exp(-(q²+p²))` where the functional integrates them.
    pub fn algebra_basis(&self, d: u32) -> Vec<Observable<C>> {
        let alg = self.algebra();
        let chart = alg.chart();
        let weight = match self.kind {
            ModelKind::Faithful => Some(int(1)),
            ModelKind::Schrodinger if chart.density_c() == int(0) => Some(int(1)),
            _ => None,
        };
        let mut out = Vec::new();
        for &c in &self.support {
            for m in monomials_up_to(chart.nvars(), d) {
                let mut f = Observable::<C>::monomial(chart, alg.trunc(), m);
                if let Some(g) = &weight {
                    f = &f * &Observable::gauss(chart, alg.trunc(), g.clone());
                }
                out.push(f.restrict(&[c].into()));
            }
        }
        out
    }

    /// Monomial vectors of degree at most `d` on single support components.
    pub fn vector_basis(&self, d: u32) -> Vec<Observable<C>> {
        let chart = &self.vector_chart;
        let mut out = Vec::new();
        for &c in &self.support {
            for m in monomials_up_to(chart.nvars(), d) {
                out.push(Observable::monomial(chart, self.trunc(), m).restrict(&[c].into()));
            }
        }
        out
    }

    /// Support is everything and no nonzero basis observable of degree at
    /// most `d` lies in the Gel'fand ideal.
    pub fn faithfulness(&self, d: u32, eps: f64) -> Result<FaithfulnessReport> {
        let m = self.algebra().chart().components;
        let support_full = self.omega.support().normalize(m) == SupportDescriptor::Full;
        let mut basis_faithful = true;
        for f in self.algebra_basis(d) {
            if self.gelfand(&f, eps)?.member {
                basis_faithful = false;
                break;
            }
        }
        Ok(FaithfulnessReport { support_full, basis_faithful: basis_faithful && support_full })
    }

    /// Summand supports of a convex functional with their indicators; a
    /// single summand yields the identity on its support.
    pub fn direct_sum(&self) -> Vec<(BTreeSet<usize>, Observable<C>)> {
        let alg = self.algebra();
        let m = alg.chart().components;
        let supports: Vec<BTreeSet<usize>> = match self.omega.kind() {
            FunctionalKind::Convex(terms) => terms.iter().map(|(_, w)| w.support().components(m)).collect(),
            _ => vec![self.support.clone()],
        };
        supports
            .into_iter()
            .map(|s| {
                let ind = Observable::indicator(alg.chart(), alg.trunc(), &s);
                (s, ind)
            })
            .collect()
    }

    /// Split a vector into its summand parts.
    pub fn split(&self, u: &Observable<C>) -> Vec<Observable<C>> {
        self.direct_sum().iter().map(|(s, _)| u.restrict(s)).collect()
    }
}

fn mul_mono<C: Scalar>(g: &GaussPoly<C>, m: &Mono) -> GaussPoly<C> {
    g.map_blocks(|_, p| p.mul_mono(m))
}

/// Drop monomials of total degree above `d`.
pub fn truncate_degree<C: Scalar>(u: &Observable<C>, d: u32) -> Observable<C> {
    u.map_coeffs(|g| {
        g.map_blocks(|_, p| p.map_monos(p.nvars(), |m| if m.degree() <= d { Some(m.clone()) } else { None }))
    })
}

impl<C: Scalar> PositiveFunctional<C> {
    /// The same functional on a wider or narrower window.
    pub fn with_trunc(&self, trunc: i32) -> Result<Self> {
        let alg = self.algebra().with_trunc(trunc);
        match self.kind() {
            FunctionalKind::DeltaPoint { component, point } => Self::delta(&alg, *component, point.clone()),
            FunctionalKind::Trace { components } => Self::trace_on(&alg, components.clone()),
            FunctionalKind::Kms { h, beta, .. } => Self::kms(&alg, &h.with_trunc(trunc), beta.clone()),
            FunctionalKind::Schrodinger { components } => Self::schrodinger_on(&alg, components.clone()),
            FunctionalKind::Convex(terms) => Self::convex(
                terms
                    .iter()
                    .map(|(a, w)| Ok((a.with_trunc(trunc), w.with_trunc(trunc)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Density;
    use crate::scalar::{cq, Cq};
    use crate::star::Product;

    type O = Observable<Cq>;

    fn wick(n: i32) -> (StarAlgebra, Gns<Cq>) {
        let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, n).unwrap();
        let g = Gns::new(&PositiveFunctional::delta0(&alg).unwrap()).unwrap();
        (alg, g)
    }

    #[test]
    fn fock_reduce_and_action() {
        let (alg, g) = wick(4);
        let zb: O = alg.var("zbar1").unwrap();
        let z: O = alg.var("z1").unwrap();
        let ybar = O::var(g.vector_chart(), 4, 0);
        assert_eq!(g.reduce(&zb).unwrap(), ybar);
        assert!(g.reduce(&z).unwrap().is_zero());
        let one = g.reduce(&alg.one()).unwrap();
        assert_eq!(g.left(&zb, &one).unwrap(), ybar);
        let two_lam = O::lambda_scalar(g.vector_chart(), &LambdaSeries::monomial(1, cq(int(2), int(0)), 4));
        assert_eq!(g.left(&z, &ybar).unwrap(), two_lam);
    }

    #[test]
    fn fock_model_matches_quotient() {
        let (alg, g) = wick(4);
        for f in g.algebra_basis(3) {
            for h in g.algebra_basis(3) {
                let explicit = g.left(&f, &g.reduce(&h).unwrap()).unwrap();
                assert_eq!(explicit, g.left_via_quotient(&f, &h).unwrap(), "f={f:?} h={h:?}");
                let direct = g.functional().pairing(&f, &h).unwrap();
                let model = g.inner(&g.reduce(&f).unwrap(), &g.reduce(&h).unwrap()).unwrap();
                assert_eq!(direct, model);
            }
        }
        let _ = alg;
    }

    #[test]
    fn gelfand_of_delta() {
        let (alg, g) = wick(4);
        let z = g.gelfand(&alg.var("z1").unwrap(), 1e-9).unwrap();
        assert!(z.member && z.consistent());
        let zb = g.gelfand(&alg.var("zbar1").unwrap(), 1e-9).unwrap();
        assert!(!zb.member && zb.consistent());
        assert!(!g.faithfulness(2, 1e-9).unwrap().faithful());
    }

    #[test]
    fn schrodinger_examples() {
        let lebesgue = StarAlgebra::new(Chart::cotangent(1, Density::Lebesgue), Product::Weyl, 4).unwrap();
        let g = Gns::<Cq>::new(&PositiveFunctional::schrodinger(&lebesgue).unwrap()).unwrap();
        let p: O = lebesgue.var("p1").unwrap();
        assert!(g.reduce(&p).unwrap().is_zero());
        let cfg = g.vector_chart().clone();
        let u = O::monomial(&cfg, 4, Mono::from_exps(&[3]));
        let expect = O::monomial(&cfg, 4, Mono::from_exps(&[2])).scale(&cq(int(0), int(-3))).shift(1);
        assert_eq!(g.left(&p, &u).unwrap(), expect);

        let gauss = StarAlgebra::new(Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl, 4).unwrap();
        let g = Gns::<Cq>::new(&PositiveFunctional::schrodinger(&gauss).unwrap()).unwrap();
        let p: O = gauss.var("p1").unwrap();
        let u = O::monomial(&cfg, 4, Mono::from_exps(&[1]));
        let i_lam = cq(int(0), int(1));
        let expect = &O::monomial(&cfg, 4, Mono::from_exps(&[2])).scale(&i_lam).shift(1)
            - &O::one(&cfg, 4).scale(&i_lam).shift(1);
        assert_eq!(g.left(&p, &u).unwrap(), expect);
    }

    #[test]
    fn schrodinger_model_matches_quotient() {
        let alg = StarAlgebra::new(Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl, 4).unwrap();
        let g = Gns::<Cq>::new(&PositiveFunctional::schrodinger(&alg).unwrap()).unwrap();
        for f in g.algebra_basis(3) {
            for h in g.algebra_basis(3) {
                let explicit = g.left(&f, &g.reduce(&h).unwrap()).unwrap();
                assert_eq!(explicit, g.left_via_quotient(&f, &h).unwrap(), "f={f:?} h={h:?}");
            }
        }
    }

    #[test]
    fn trace_is_faithful() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
        let g = Gns::<Cq>::new(&PositiveFunctional::trace(&alg).unwrap()).unwrap();
        assert!(g.faithfulness(2, 1e-9).unwrap().faithful());
    }
}
