//! Star products on flat charts, the N operator and the star exponential.
//!
//! Moyal, Wick and standard-ordered products are all of the form
//!
//! ```text
//! f ⋆ g = Σ_α  b^{|α|} λ^{|α|} / α!  ·  Π_j s_j^{α_j}  ·  (∂^{L(α)} f)(∂^{R(α)} g)
//! ```
//!
//! for a base `b` and a list of derivative pairs `(L_j, R_j, s_j)`. The
//! Weyl-ordered product is `N⁻¹(Nf ⋆_std Ng)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::coeffs::{Chart, ChartKind, GaussPoly, Mono, Observable, Part};
use crate::error::{Error, Result};
use crate::scalar::{cq, int, rat, Cq, Rational, Scalar};
use crate::series::{LambdaSeries, Order};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    Moyal,
    Wick,
    Standard,
    Weyl,
}

impl Product {
    pub fn name(self) -> &'static str {
        match self {
            Product::Moyal => "moyal",
            Product::Wick => "wick",
            Product::Standard => "std",
            Product::Weyl => "weyl",
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Product {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moyal" => Ok(Product::Moyal),
            "wick" => Ok(Product::Wick),
            "std" => Ok(Product::Standard),
            "weyl" => Ok(Product::Weyl),
            _ => Err(Error::Invalid(format!("unknown product `{s}` (moyal|wick|std|weyl)"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    left: usize,
    right: usize,
    negative: bool,
}

/// A star product on a chart, truncated at `λ^trunc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarAlgebra {
    chart: Chart,
    product: Product,
    trunc: i32,
}

impl StarAlgebra {
    pub fn new(chart: Chart, product: Product, trunc: i32) -> Result<Self> {
        let ok = match product {
            Product::Moyal | Product::Standard => chart.is_phase_space(),
            Product::Wick => chart.kind == ChartKind::WickSpace,
            Product::Weyl => matches!(chart.kind, ChartKind::CotangentFlat(_)),
        };
        if !ok {
            return Err(Error::UnsupportedChart(format!("{product} product on {chart}")));
        }
        Ok(StarAlgebra { chart, product, trunc })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn product(&self) -> Product {
        self.product
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn with_trunc(&self, trunc: i32) -> Self {
        StarAlgebra { trunc, ..self.clone() }
    }

    pub fn one<C: Scalar>(&self) -> Observable<C> {
        Observable::one(&self.chart, self.trunc)
    }

    pub fn var<C: Scalar>(&self, name: &str) -> Result<Observable<C>> {
        Observable::named(&self.chart, self.trunc, name)
    }

    pub fn zero<C: Scalar>(&self) -> Observable<C> {
        Observable::zero(&self.chart, self.trunc)
    }

    /// Base and derivative pairs of the bidifferential expansion. The Weyl
    /// product uses the standard-ordered kernel between two N conjugations.
    fn kernel(&self) -> (Cq, Vec<Pair>) {
        let n = self.chart.n;
        let c = &self.chart;
        match self.product {
            Product::Moyal => {
                let mut pairs = Vec::new();
                for k in 0..n {
                    pairs.push(Pair { left: c.q(k), right: c.p(k), negative: false });
                    pairs.push(Pair { left: c.p(k), right: c.q(k), negative: true });
                }
                (cq(int(0), rat(1, 2)), pairs)
            }
            Product::Wick => (
                cq(int(2), int(0)),
                (0..n).map(|k| Pair { left: c.z(k), right: c.zbar(k), negative: false }).collect(),
            ),
            Product::Standard | Product::Weyl => (
                cq(int(0), int(-1)),
                (0..n).map(|k| Pair { left: c.p(k), right: c.q(k), negative: false }).collect(),
            ),
        }
    }

    fn check<C: Scalar>(&self, f: &Observable<C>) -> Result<()> {
        if f.chart() != &self.chart || f.trunc() != self.trunc {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// `f ⋆ g`, computed componentwise.
    pub fn mul<C: Scalar>(&self, f: &Observable<C>, g: &Observable<C>) -> Result<Observable<C>> {
        self.check(f)?;
        self.check(g)?;
        if self.product == Product::Weyl {
            let nf = n_operator(f, Direction::Forward)?;
            let ng = n_operator(g, Direction::Forward)?;
            return n_operator(&self.raw_mul(&nf, &ng), Direction::Inverse);
        }
        Ok(self.raw_mul(f, g))
    }

    fn raw_mul<C: Scalar>(&self, f: &Observable<C>, g: &Observable<C>) -> Observable<C> {
        let (base, pairs) = self.kernel();
        let base = C::from_cq(&base);
        let parts = f
            .parts()
            .iter()
            .zip(g.parts())
            .map(|(a, b)| bidiff_series(&pairs, &base, a, b, self.trunc))
            .collect();
        Observable::from_parts(&self.chart, self.trunc, parts).expect("parts built on the algebra chart")
    }

    /// Star product of two coefficient series (not available for Weyl).
    pub fn mul_part<C: Scalar>(&self, a: &Part<C>, b: &Part<C>) -> Result<Part<C>> {
        if self.product == Product::Weyl {
            return Err(Error::UnsupportedChart("coefficient-level Weyl product".into()));
        }
        let (base, pairs) = self.kernel();
        Ok(bidiff_series(&pairs, &C::from_cq(&base), a, b, self.trunc))
    }

    /// `f ⋆ g - g ⋆ f`.
    pub fn comm<C: Scalar>(&self, f: &Observable<C>, g: &Observable<C>) -> Result<Observable<C>> {
        self.mul(f, g)?.checked_sub(&self.mul(g, f)?)
    }

    /// The `*`-involution: complex conjugation, except for the standard
    /// ordering where it is `N ∘ conj ∘ N⁻¹`.
    pub fn involution<C: Scalar>(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.check(f)?;
        if self.product != Product::Standard {
            return Ok(f.conj());
        }
        let flat = match self.chart.kind {
            ChartKind::CotangentFlat(_) => self.chart.clone(),
            _ => Chart { kind: ChartKind::CotangentFlat(crate::coeffs::Density::Lebesgue), ..self.chart.clone() },
        };
        let g = f.with_chart(&flat)?;
        let g = n_operator(&n_operator(&g, Direction::Inverse)?.conj(), Direction::Forward)?;
        g.with_chart(&self.chart)
    }

    /// `f^{⋆k}`.
    pub fn power<C: Scalar>(&self, f: &Observable<C>, k: u32) -> Result<Observable<C>> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Left multiplication `u ↦ c ⋆ u` as a differential operator: a map
    /// from derivative multi-index to coefficient series. `extra` widens the
    /// derivative budget for targets of negative order.
    pub fn left_symbol<C: Scalar>(&self, c: &Part<C>, extra: i32) -> Result<BTreeMap<Mono, Part<C>>> {
        self.symbol(c, extra, true)
    }

    /// Right multiplication `u ↦ u ⋆ c` as a differential operator.
    pub fn right_symbol<C: Scalar>(&self, c: &Part<C>, extra: i32) -> Result<BTreeMap<Mono, Part<C>>> {
        self.symbol(c, extra, false)
    }

    fn symbol<C: Scalar>(&self, c: &Part<C>, extra: i32, left: bool) -> Result<BTreeMap<Mono, Part<C>>> {
        if self.product == Product::Weyl {
            return Err(Error::UnsupportedChart("Weyl product symbols".into()));
        }
        let (base, mut pairs) = self.kernel();
        if !left {
            // u ⋆ c: the operator differentiates the left factor.
            for p in &mut pairs {
                std::mem::swap(&mut p.left, &mut p.right);
            }
        }
        let base = C::from_cq(&base);
        let nv = self.chart.nvars();
        let mut out: BTreeMap<Mono, Part<C>> = BTreeMap::new();
        for (a, ca) in c.terms() {
            let budget = self.trunc - a + extra;
            if budget < 0 {
                continue;
            }
            let mut emit = |total: i32, w: &C, fd: &GaussPoly<C>, _g: Option<&GaussPoly<C>>, idx: &Mono| {
                let entry = out.entry(idx.clone()).or_insert_with(|| LambdaSeries::zero(self.trunc));
                entry.add_term(a + total, fd.scale(w));
            };
            dfs(&pairs, 0, &base, ca.clone(), None, Mono::one(nv), 0, C::one(), budget, &mut emit);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// One leaf of the expansion: `(|α|, weight, ∂^L f, ∂^R g, R(α))`.
type Emit<'a, C> = dyn FnMut(i32, &C, &GaussPoly<C>, Option<&GaussPoly<C>>, &Mono) + 'a;

#[allow(clippy::too_many_arguments)]
fn dfs<C: Scalar>(
    pairs: &[Pair],
    j: usize,
    base: &C,
    fd: GaussPoly<C>,
    gd: Option<GaussPoly<C>>,
    ridx: Mono,
    total: i32,
    weight: C,
    budget: i32,
    emit: &mut Emit<'_, C>,
) {
    if j == pairs.len() {
        emit(total, &weight, &fd, gd.as_ref(), &ridx);
        return;
    }
    let pair = pairs[j];
    let step = if pair.negative { -base.clone() } else { base.clone() };
    let (mut fd, mut gd, mut ridx, mut weight) = (fd, gd, ridx, weight);
    let mut e = 0;
    loop {
        dfs(pairs, j + 1, base, fd.clone(), gd.clone(), ridx.clone(), total + e, weight.clone(), budget, emit);
        if total + e + 1 > budget {
            break;
        }
        fd = fd.derive(pair.left);
        if fd.is_zero() {
            break;
        }
        if let Some(g) = gd.as_mut() {
            *g = g.derive(pair.right);
            if g.is_zero() {
                break;
            }
        }
        e += 1;
        ridx.0[pair.right] += 1;
        weight = step.mul_ref(&weight) / C::from_i64(e as i64);
    }
}

fn bidiff_series<C: Scalar>(pairs: &[Pair], base: &C, f: &Part<C>, g: &Part<C>, trunc: i32) -> Part<C> {
    let mut out = LambdaSeries::zero(trunc);
    let Some((_, f0)) = f.leading().or_else(|| g.leading()) else {
        return out;
    };
    let nv = f0.frame().nvars;
    for (a, fa) in f.terms() {
        for (b, gb) in g.terms() {
            let budget = trunc - a - b;
            if budget < 0 {
                break;
            }
            let mut emit = |total: i32, w: &C, fd: &GaussPoly<C>, gd: Option<&GaussPoly<C>>, _: &Mono| {
                let prod = fd.mul(gd.expect("two-sided expansion"));
                out.add_term(a + b + total, prod.scale(w));
            };
            dfs(pairs, 0, base, fa.clone(), Some(gb.clone()), Mono::one(nv), 0, C::one(), budget, &mut emit);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `N = exp(G)` with `G = -(iλ/2)(Σ ∂²/∂q_k∂p_k - 2c Σ q_k ∂/∂p_k)` on a flat
/// cotangent chart with density `exp(-c q²)`; the inverse uses `-G`.
pub fn n_operator<C: Scalar>(f: &Observable<C>, direction: Direction) -> Result<Observable<C>> {
    let chart = f.chart().clone();
    if !matches!(chart.kind, ChartKind::CotangentFlat(_)) {
        return Err(Error::UnsupportedChart(format!("N operator on {chart}")));
    }
    let c = C::from_rational(&(chart.density_c() * int(2)));
    let sign = match direction {
        Direction::Forward => -C::from_ratio(1, 2),
        Direction::Inverse => C::from_ratio(1, 2),
    };
    let factor = C::imag_unit().mul_ref(&sign);
    let generator = |g: &GaussPoly<C>| {
        let mut acc = GaussPoly::zero(g.frame());
        for k in 0..chart.n {
            let dp = g.derive(chart.p(k));
            acc = acc.add(&dp.derive(chart.q(k)));
            if !c.vanishes() {
                acc = acc.sub(&dp.mul_var(chart.q(k)).scale(&c));
            }
        }
        acc.scale(&factor)
    };
    let mut term = f.clone();
    let mut acc = f.clone();
    let mut k = 0i64;
    loop {
        k += 1;
        term = term.map_coeffs(generator).shift(1).scale(&(C::one() / C::from_i64(k)));
        if term.is_zero() {
            break;
        }
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

/// `Exp(βH) = Σ_k β^k H^{⋆k}/k!` for a λ-scalar `β`; requires
/// `o(β) + o(H) >= 1` so that the sum terminates in the window.
pub fn star_exp<C: Scalar>(alg: &StarAlgebra, h: &Observable<C>, beta: &LambdaSeries<C>) -> Result<Observable<C>> {
    alg.check(h)?;
    let x = h.scale_series(beta);
    let o = h.order().plus(beta.order());
    if let Order::Finite(o) = o {
        if o < 1 && !x.is_zero() {
            return Err(Error::OrderTooLow(format!("o(β) + o(H) = {o}, star exponential needs >= 1")));
        }
    }
    let mut term = alg.one();
    let mut acc = term.clone();
    let mut k = 0i64;
    loop {
        k += 1;
        term = alg.mul(&term, &x)?.scale(&(C::one() / C::from_i64(k)));
        if term.is_zero() {
            break;
        }
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

/// `Exp(βH)` for a rational `β`.
pub fn star_exp_rational<C: Scalar>(alg: &StarAlgebra, h: &Observable<C>, beta: &Rational) -> Result<Observable<C>> {
    star_exp(alg, h, &LambdaSeries::constant(C::from_rational(beta), alg.trunc()))
}

/// Coefficients of `Exp(βH)` as a polynomial in a formal `β`: entry `k` is
/// `H^{⋆k}/k!`. Requires `o(H) >= 1`.
pub fn star_exp_coefficients<C: Scalar>(alg: &StarAlgebra, h: &Observable<C>) -> Result<Vec<Observable<C>>> {
    alg.check(h)?;
    if let Order::Finite(o) = h.order() {
        if o < 1 {
            return Err(Error::OrderTooLow(format!("o(H) = {o}, polynomial β mode needs >= 1")));
        }
    }
    let mut out = vec![alg.one()];
    loop {
        let k = out.len() as i64;
        let next = alg.mul(out.last().expect("nonempty"), h)?.scale(&(C::one() / C::from_i64(k)));
        if next.is_zero() {
            break;
        }
        out.push(next);
    }
    Ok(out)
}

/// `H(λ^e P) = e·λ^e P + λ^e Σ_k p_k ∂P/∂p_k`.
pub fn homogeneity_operator<C: Scalar>(f: &Observable<C>) -> Result<Observable<C>> {
    let chart = f.chart().clone();
    if !chart.is_phase_space() {
        return Err(Error::UnsupportedChart(format!("homogeneity operator on {chart}")));
    }
    Ok(f.map_parts(|part| {
        part.map_with_exponent(|e, g| {
            let mut acc = g.scale(&C::from_i64(e as i64));
            for k in 0..chart.n {
                acc = acc.add(&g.derive(chart.p(k)).mul_var(chart.p(k)));
            }
            acc
        })
    }))
}

/// Whether `H` acts as a derivation of the standard-ordered product on `f, g`.
pub fn homogeneity_check<C: Scalar>(alg: &StarAlgebra, f: &Observable<C>, g: &Observable<C>) -> Result<bool> {
    if alg.product() != Product::Standard {
        return Err(Error::UnsupportedChart(format!(
            "homogeneity is a property of the standard-ordered product, not {}",
            alg.product()
        )));
    }
    let lhs = homogeneity_operator(&alg.mul(f, g)?)?;
    let rhs = alg.mul(&homogeneity_operator(f)?, g)?.checked_add(&alg.mul(f, &homogeneity_operator(g)?)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Density;
    use crate::scalar::{cq_int, cq_real};

    type O = Observable<Cq>;

    fn moyal(n: i32) -> StarAlgebra {
        StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).unwrap()
    }

    fn lam(alg: &StarAlgebra, c: Cq) -> O {
        O::lambda_scalar(alg.chart(), &LambdaSeries::monomial(1, c, alg.trunc()))
    }

    #[test]
    fn moyal_q_p() {
        let a = moyal(6);
        let (q, p): (O, O) = (a.var("q1").unwrap(), a.var("p1").unwrap());
        let expect = &(&q * &p) + &lam(&a, cq(int(0), rat(1, 2)));
        assert_eq!(a.mul(&q, &p).unwrap(), expect);
        assert_eq!(a.comm(&q, &p).unwrap(), lam(&a, cq(int(0), int(1))));
    }

    #[test]
    fn wick_z_zbar() {
        let a = StarAlgebra::new(Chart::wick(1), Product::Wick, 6).unwrap();
        let (z, zb): (O, O) = (a.var("z1").unwrap(), a.var("zbar1").unwrap());
        assert_eq!(a.mul(&z, &zb).unwrap(), &(&z * &zb) + &lam(&a, cq_int(2)));
        assert_eq!(a.mul(&zb, &z).unwrap(), &zb * &z);
        assert_eq!(a.comm(&z, &zb).unwrap(), lam(&a, cq_int(2)));
    }

    #[test]
    fn unit_is_neutral() {
        for (chart, prod) in [
            (Chart::moyal(1), Product::Moyal),
            (Chart::wick(1), Product::Wick),
            (Chart::cotangent(1, Density::Lebesgue), Product::Standard),
            (Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl),
        ] {
            let a = StarAlgebra::new(chart.clone(), prod, 4).unwrap();
            let f = O::monomial(&chart, 4, Mono::from_exps(&[2, 1]));
            assert_eq!(a.mul(&a.one(), &f).unwrap(), f);
            assert_eq!(a.mul(&f, &a.one()).unwrap(), f);
        }
    }

    #[test]
    fn products_reject_wrong_charts() {
        assert!(StarAlgebra::new(Chart::moyal(1), Product::Wick, 4).is_err());
        assert!(StarAlgebra::new(Chart::moyal(1), Product::Weyl, 4).is_err());
        assert!(StarAlgebra::new(Chart::wick(1), Product::Moyal, 4).is_err());
    }

    #[test]
    fn n_operator_examples() {
        let leb = Chart::cotangent(1, Density::Lebesgue);
        let p = O::var(&leb, 4, 1);
        assert_eq!(n_operator(&p, Direction::Forward).unwrap(), p);
        let gau = Chart::cotangent(1, Density::Gaussian(int(1)));
        let p = O::var(&gau, 4, 1);
        let q = O::var(&gau, 4, 0);
        let expect = &p + &q.shift(1).scale(&cq(int(0), int(1)));
        assert_eq!(n_operator(&p, Direction::Forward).unwrap(), expect);
        let f = O::monomial(&gau, 4, Mono::from_exps(&[2, 3]));
        let nf = n_operator(&f, Direction::Forward).unwrap();
        assert_eq!(n_operator(&nf, Direction::Inverse).unwrap(), f);
        assert!(n_operator(&O::var(&Chart::moyal(1), 4, 0), Direction::Forward).is_err());
    }

    #[test]
    fn weyl_ordered_q_p() {
        let chart = Chart::cotangent(1, Density::Gaussian(int(1)));
        let a = StarAlgebra::new(chart, Product::Weyl, 4).unwrap();
        let (q, p): (O, O) = (a.var("q1").unwrap(), a.var("p1").unwrap());
        let half_i = lam(&a, cq(int(0), rat(1, 2)));
        assert_eq!(a.mul(&q, &p).unwrap(), &(&q * &p) + &half_i);
        assert_eq!(a.mul(&p, &q).unwrap(), &(&q * &p) - &half_i);
    }

    #[test]
    fn star_exp_examples() {
        let a = moyal(6);
        let h = a.var::<Cq>("q1").unwrap().shift(1);
        let zero = LambdaSeries::zero(6);
        assert_eq!(star_exp(&a, &h, &zero).unwrap(), a.one());
        let e = star_exp_rational(&a, &h, &int(1)).unwrap();
        let mut expect = O::zero(a.chart(), 6);
        let mut fact = 1i64;
        for k in 0..=6u16 {
            if k > 0 {
                fact *= k as i64;
            }
            let t = O::monomial(a.chart(), 6, Mono::from_exps(&[k, 0])).shift(k as i32);
            expect = &expect + &t.scale(&cq_real(rat(1, fact)));
        }
        assert_eq!(e, expect);
        let low = a.var::<Cq>("q1").unwrap();
        assert!(matches!(star_exp_rational(&a, &low, &int(1)), Err(Error::OrderTooLow(_))));
    }

    #[test]
    fn homogeneity_examples() {
        let chart = Chart::cotangent(1, Density::Lebesgue);
        let a = StarAlgebra::new(chart.clone(), Product::Standard, 6).unwrap();
        let (q, p): (O, O) = (a.var("q1").unwrap(), a.var("p1").unwrap());
        assert!(homogeneity_check(&a, &p, &q).unwrap());
        assert!(homogeneity_check(&a, &(&p * &p), &(&q * &q)).unwrap());
        let m = moyal(6);
        assert!(matches!(homogeneity_check(&m, &q.with_chart(&Chart::moyal(1)).unwrap(), &q.with_chart(&Chart::moyal(1)).unwrap()), Err(Error::UnsupportedChart(_))));
    }

    #[test]
    fn left_symbol_reproduces_product() {
        let a = moyal(4);
        let c: O = &a.var::<Cq>("q1").unwrap() * &a.var("p1").unwrap();
        let u = O::monomial(a.chart(), 4, Mono::from_exps(&[1, 2]));
        let sym = a.left_symbol(c.part(0), 0).unwrap();
        let mut acc = LambdaSeries::zero(4);
        for (alpha, coeff) in &sym {
            let d = u.part(0).map(|g| g.derive_multi(alpha));
            acc = &acc + &(coeff * &d);
        }
        assert_eq!(&acc, a.mul(&c, &u).unwrap().part(0));
        let rsym = a.right_symbol(c.part(0), 0).unwrap();
        let mut acc = LambdaSeries::zero(4);
        for (alpha, coeff) in &rsym {
            let d = u.part(0).map(|g| g.derive_multi(alpha));
            acc = &acc + &(coeff * &d);
        }
        assert_eq!(&acc, a.mul(&u, &c).unwrap().part(0));
    }

    #[test]
    fn involution_reverses_products() {
        let charts = [
            (Chart::moyal(1), Product::Moyal),
            (Chart::wick(1), Product::Wick),
            (Chart::cotangent(1, Density::Lebesgue), Product::Standard),
            (Chart::moyal(1), Product::Standard),
            (Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl),
        ];
        for (chart, product) in charts {
            let a = StarAlgebra::new(chart.clone(), product, 4).unwrap();
            let names = chart.var_names();
            let x: O = a.var(&names[0]).unwrap();
            let y: O = a.var(&names[1]).unwrap();
            let f = &(&x * &x) * &y;
            let g = (&y * &y).scale(&Cq::imag_unit()).checked_add(&x).unwrap();
            let lhs = a.involution(&a.mul(&f, &g).unwrap()).unwrap();
            let rhs = a.mul(&a.involution(&g).unwrap(), &a.involution(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{product}");
            assert_eq!(a.involution(&a.involution(&g).unwrap()).unwrap(), g);
        }
    }
}
