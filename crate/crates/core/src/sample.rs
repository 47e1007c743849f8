//! Seeded random observables, series and operators for the property suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{monomials_up_to, Chart, GaussPoly, Mono, Observable, Poly};
use crate::oper::DiffOp;
use crate::scalar::{cq, rat, Cq, Rational};
use crate::series::LambdaSeries;

pub use rand::SeedableRng;

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `-4..=4` and denominator in `1..=3`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn small_cq(rng: &mut impl Rng, complex: bool) -> Cq {
    let im = if complex && rng.gen_bool(0.5) { small_rational(rng) } else { rat(0, 1) };
    cq(small_rational(rng), im)
}

/// Exact series with exponents in `lo..=trunc`.
pub fn series(rng: &mut impl Rng, lo: i32, trunc: i32) -> LambdaSeries<Cq> {
    let mut s = LambdaSeries::zero(trunc);
    for _ in 0..rng.gen_range(0..=4) {
        s.add_term(rng.gen_range(lo..=trunc), small_cq(rng, true));
    }
    s
}

/// Real rational series with exponents in `lo..=trunc`.
pub fn real_series(rng: &mut impl Rng, lo: i32, trunc: i32) -> LambdaSeries<Rational> {
    let mut s = LambdaSeries::zero(trunc);
    for _ in 0..rng.gen_range(0..=4) {
        s.add_term(rng.gen_range(lo..=trunc), small_rational(rng));
    }
    s
}

/// Polynomial of total degree at most `deg` with a few terms.
pub fn poly(rng: &mut impl Rng, nvars: usize, deg: u32, complex: bool) -> Poly<Cq> {
    let monos = monomials_up_to(nvars, deg);
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=3) {
        let m: Mono = monos[rng.gen_range(0..monos.len())].clone();
        p.add_term(m, small_cq(rng, complex));
    }
    p
}

/// Shape of a random observable.
#[derive(Clone, Debug)]
pub struct Shape {
    pub deg: u32,
    /// Largest λ-exponent used (at most the window).
    pub max_lambda: i32,
    /// Gaussian weight for every term, if any.
    pub gauss: Option<Rational>,
    pub complex: bool,
    /// Independent coefficients per component instead of a uniform one.
    pub per_component: bool,
}

impl Shape {
    pub fn polynomial(deg: u32) -> Self {
        Shape { deg, max_lambda: 1, gauss: None, complex: true, per_component: false }
    }

    pub fn gaussian(deg: u32, gamma: Rational) -> Self {
        Shape { gauss: Some(gamma), ..Self::polynomial(deg) }
    }
}

pub fn observable(rng: &mut impl Rng, chart: &Chart, trunc: i32, shape: &Shape) -> Observable<Cq> {
    let frame = chart.frame();
    let mut part = || {
        let mut s = LambdaSeries::zero(trunc);
        for _ in 0..rng.gen_range(1..=2) {
            let p = poly(rng, chart.nvars(), shape.deg, shape.complex);
            let g = match &shape.gauss {
                Some(gamma) => GaussPoly::weighted(frame, gamma.clone(), p),
                None => GaussPoly::from_poly(frame, p),
            };
            s.add_term(rng.gen_range(0..=shape.max_lambda.min(trunc).max(0)), g);
        }
        s
    };
    if shape.per_component {
        let parts = (0..chart.components).map(|_| part()).collect();
        Observable::from_parts(chart, trunc, parts).expect("parts match the chart")
    } else {
        Observable::uniform(chart, part())
    }
}

/// Differential operator with coefficients of degree at most `coeff_deg` and
/// derivatives of order at most `order`.
pub fn diffop(rng: &mut impl Rng, chart: &Chart, trunc: i32, coeff_deg: u32, order: u32) -> DiffOp<Cq> {
    let nvars = chart.nvars();
    let alphas = monomials_up_to(nvars, order);
    let mut d = DiffOp::zero(nvars, trunc);
    for _ in 0..rng.gen_range(1..=3) {
        let alpha = alphas[rng.gen_range(0..alphas.len())].clone();
        let c = GaussPoly::from_poly(chart.frame(), poly(rng, nvars, coeff_deg, true));
        d.add_term(alpha, &LambdaSeries::monomial(0, c, trunc));
    }
    d
}
