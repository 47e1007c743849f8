//! Star products and functionals against closed forms computed here from
//! scratch on dense `(λ-exponent, x-exponent, y-exponent)` tables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use starq::coeffs::{Density, Mono};
use starq::gns::{Gns, PositiveFunctional};
use starq::sample::{self, Shape};
use starq::scalar::{cq, int, rat, Value};
use starq::star::{Product, StarAlgebra};
use starq::{Chart, Cq, LambdaSeries, Observable, Rational};

type O = Observable<Cq>;
/// `(e, a, b) -> c` for `c λ^e x^a y^b`.
type Table = BTreeMap<(i32, u32, u32), Cq>;

fn table(f: &O) -> Table {
    let mut t = Table::new();
    for (e, g) in f.part(0).terms() {
        for (gamma, p) in g.blocks() {
            assert!(gamma.is_zero(), "oracle tables hold polynomials only");
            for (m, c) in p.terms() {
                t.insert((e, m.exp(0) as u32, m.exp(1) as u32), c.clone());
            }
        }
    }
    t
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from_integer(falling(n, k)) / Rational::from_integer(falling(k, k))
}

fn fact(k: u32) -> Rational {
    Rational::from_integer(falling(k, k))
}

/// `Σ_r base^r λ^r / r! Σ_k C(r,k) s^k (∂x^{r-k} ∂y^k f)(∂y^{r-k} ∂x^k g)` when
/// `mixed`, else `Σ_r base^r λ^r / r! (∂x^r f)(∂y^r g)`.
fn oracle(f: &Table, g: &Table, base: Cq, sign: i64, mixed: bool, trunc: i32) -> Table {
    let mut out = Table::new();
    for (&(e1, a1, b1), c1) in f {
        for (&(e2, a2, b2), c2) in g {
            for r in 0..=(a1 + b1 + a2 + b2) {
                let e = e1 + e2 + r as i32;
                if e > trunc {
                    break;
                }
                let ks: Vec<u32> = if mixed { (0..=r).collect() } else { vec![0] };
                for k in ks {
                    // Derivatives hitting f: x^(r-k) y^k; hitting g: y^(r-k) x^k.
                    let (dfx, dfy, dgy, dgx) = (r - k, k, r - k, k);
                    if dfx > a1 || dfy > b1 || dgy > b2 || dgx > a2 {
                        continue;
                    }
                    let mut w = Rational::from_integer(falling(a1, dfx) * falling(b1, dfy) * falling(a2, dgx) * falling(b2, dgy));
                    w = w * binom(r, k) / fact(r);
                    if sign < 0 && k % 2 == 1 {
                        w = -w;
                    }
                    let mut c = c1 * c2 * cq(w, int(0));
                    for _ in 0..r {
                        c *= base.clone();
                    }
                    let key = (e, a1 - dfx + a2 - dgx, b1 - dfy + b2 - dgy);
                    let slot = out.entry(key).or_insert_with(Cq::zero);
                    *slot += c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn pairs(alg: &StarAlgebra, seed: u64, count: usize) -> Vec<(O, O)> {
    let mut rng = sample::rng(seed);
    let shape = Shape::polynomial(4);
    (0..count)
        .map(|_| {
            (
                sample::observable(&mut rng, alg.chart(), alg.trunc(), &shape),
                sample::observable(&mut rng, alg.chart(), alg.trunc(), &shape),
            )
        })
        .collect()
}

#[test]
fn moyal_matches_binomial_expansion() {
    // f ⋆ g = Σ (iλ/2)^r/r! Σ_k C(r,k)(-1)^k ∂q^{r-k}∂p^k f · ∂p^{r-k}∂q^k g
    let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 6).unwrap();
    for (f, g) in pairs(&alg, 11, 40) {
        let expect = oracle(&table(&f), &table(&g), cq(int(0), rat(1, 2)), -1, true, 6);
        assert_eq!(table(&alg.mul(&f, &g).unwrap()), expect);
    }
}

#[test]
fn wick_matches_closed_form() {
    // f ⋆ g = Σ (2λ)^r/r! ∂z^r f · ∂z̄^r g
    let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, 6).unwrap();
    for (f, g) in pairs(&alg, 12, 40) {
        let expect = oracle(&table(&f), &table(&g), cq(int(2), int(0)), 1, false, 6);
        assert_eq!(table(&alg.mul(&f, &g).unwrap()), expect);
    }
}

#[test]
fn standard_ordering_matches_closed_form() {
    // f ⋆ g = Σ (-iλ)^r/r! ∂p^r f · ∂q^r g; swap roles so x = p.
    let alg = StarAlgebra::new(Chart::cotangent(1, Density::Lebesgue), Product::Standard, 6).unwrap();
    let swap = |t: Table| -> Table { t.into_iter().map(|((e, a, b), c)| ((e, b, a), c)).collect() };
    for (f, g) in pairs(&alg, 13, 40) {
        let expect = swap(oracle(&swap(table(&f)), &swap(table(&g)), cq(int(0), int(-1)), 1, false, 6));
        assert_eq!(table(&alg.mul(&f, &g).unwrap()), expect);
    }
}

/// `∫ x^{2k} e^{-x²} dx = (2k-1)!!/2^k · √π`.
fn moment(k: u32) -> Rational {
    let double_fact = (1..=k).fold(Rational::one(), |acc, j| acc * int(2 * j as i64 - 1));
    double_fact / Rational::from_integer(BigInt::from(2).pow(k))
}

#[test]
fn trace_of_gaussian_moments() {
    let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 2).unwrap();
    let tr = PositiveFunctional::<Cq>::trace(&alg).unwrap();
    let gauss = O::gauss(alg.chart(), 2, int(1));
    for a in 0..4u16 {
        for b in 0..4u16 {
            let f = &O::monomial(alg.chart(), 2, Mono::from_exps(&[a, b])) * &gauss;
            let v = tr.eval(&f).unwrap();
            let expect = if a % 2 == 0 && b % 2 == 0 {
                let c = moment(a as u32 / 2) * moment(b as u32 / 2);
                LambdaSeries::monomial(0, Value::exact(cq(c, int(0)), 1), 2)
            } else {
                LambdaSeries::zero(2)
            };
            assert_eq!(v, expect, "q^{a} p^{b}");
        }
    }
}

#[test]
fn kms_at_zero_temperature_parameter_is_the_trace() {
    let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
    let h: O = &alg.var::<Cq>("q1").unwrap().shift(1) * &alg.var("p1").unwrap();
    let kms = PositiveFunctional::kms(&alg, &h, int(0)).unwrap();
    let tr = PositiveFunctional::trace(&alg).unwrap();
    let gauss = O::gauss(alg.chart(), 4, int(1));
    for (f, _) in pairs(&alg, 14, 10) {
        let f = &f * &gauss;
        assert_eq!(kms.eval(&f).unwrap(), tr.eval(&f).unwrap());
    }
}

#[test]
fn bargmann_fock_creation_and_annihilation() {
    // π(z̄) ȳ^k = ȳ^{k+1}, π(z) ȳ^k = 2λk ȳ^{k-1}.
    let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, 5).unwrap();
    let g = Gns::new(&PositiveFunctional::<Cq>::delta0(&alg).unwrap()).unwrap();
    let vc = g.vector_chart().clone();
    let ybar = |k: u16| O::monomial(&vc, 5, Mono::from_exps(&[k]));
    for k in 0..5u16 {
        assert_eq!(g.left(&alg.var("zbar1").unwrap(), &ybar(k)).unwrap(), ybar(k + 1));
        let down = if k == 0 { O::zero(&vc, 5) } else { ybar(k - 1).scale(&cq(int(2 * k as i64), int(0))).shift(1) };
        assert_eq!(g.left(&alg.var("z1").unwrap(), &ybar(k)).unwrap(), down);
    }
}

#[test]
fn schrodinger_on_lebesgue_is_canonical_quantization() {
    // ϱ(q) = q·, ϱ(p) = -iλ ∂_q.
    let alg = StarAlgebra::new(Chart::cotangent(1, Density::Lebesgue), Product::Weyl, 5).unwrap();
    let g = Gns::new(&PositiveFunctional::<Cq>::schrodinger(&alg).unwrap()).unwrap();
    let vc = g.vector_chart().clone();
    for k in 0..5u16 {
        let u = O::monomial(&vc, 5, Mono::from_exps(&[k]));
        assert_eq!(g.left(&alg.var("q1").unwrap(), &u).unwrap(), u.mul_var(0));
        let dp = u.derive(0).scale(&cq(int(0), int(-1))).shift(1);
        assert_eq!(g.left(&alg.var("p1").unwrap(), &u).unwrap(), dp);
    }
}
