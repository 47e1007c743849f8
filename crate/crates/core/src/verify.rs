//! Property batteries for every module, run by `starq verify` and the
//! acceptance harness.
//!
//! Each check reports `exact` when every comparison held with exact
//! arithmetic, `tolerance` when some comparison went through floating point
//! and held within `eps`, and `fail` otherwise.

use std::fmt;

use num_traits::{One, Zero};

use crate::coeffs::{monomials_up_to, poisson, Chart, Density, Observable};
use crate::error::{Error, Result};
use crate::gns::{Gns, PositiveFunctional};
use crate::modular::{conjugated_left, ModularData};
use crate::oper::{adjoint, apply, commutant_probe, is_local, DiffOp, OperatorExpr};
use crate::sample::{self, Shape};
use crate::scalar::{int, rat, Cq, Rational, Scalar, Value};
use crate::series::{ordered_sign, LambdaSeries, Order};
use crate::star::{
    homogeneity_check, n_operator, star_exp_coefficients, star_exp_rational, Direction, Product, StarAlgebra,
};
use crate::text::parse_in;
use crate::topo::{alr_synthesize, bump_indicator, lambda_adic_converges, strong_converges, strong_limit};

type O = Observable<Cq>;

pub const SUITES: [&str; 6] = ["series", "star", "gns", "oper", "modular", "topo"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Exact,
    Tolerance,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Tolerance => "tolerance",
            Status::Fail => "fail",
        }
    }

    pub fn passed(self) -> bool {
        self != Status::Fail
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Exact
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: String,
    pub property: String,
    pub status: Status,
    pub detail: String,
}

/// Knobs shared by all suites.
#[derive(Clone, Debug)]
pub struct Config {
    pub trunc: i32,
    pub deg: u32,
    pub seed: u64,
    pub eps: f64,
    /// Random samples per randomized property.
    pub samples: usize,
    /// Hamiltonian text for the modular suite, on the Moyal plane.
    pub hamiltonian: Option<String>,
    pub beta: Option<Rational>,
}

impl Default for Config {
    fn default() -> Self {
        Config { trunc: 6, deg: 4, seed: 0, eps: 1e-9, samples: 10, hamiltonian: None, beta: None }
    }
}

/// Run one suite (`tomita` is the modular suite; `all` runs every suite).
pub fn run(name: &str, cfg: &Config) -> Result<Vec<Check>> {
    if cfg.trunc < 1 || cfg.deg < 1 {
        return Err(Error::Invalid("verify needs trunc >= 1 and deg >= 1".into()));
    }
    let one = |n: &str| -> Result<Vec<Check>> {
        let mut out = Recorder { suite: n.to_string(), checks: Vec::new() };
        match n {
            "series" => series_suite(cfg, &mut out),
            "star" => star_suite(cfg, &mut out),
            "gns" => gns_suite(cfg, &mut out),
            "oper" => oper_suite(cfg, &mut out),
            "modular" | "tomita" => modular_suite(cfg, &mut out),
            "topo" => topo_suite(cfg, &mut out),
            _ => unreachable!("suite names are checked by the caller"),
        }
        Ok(out.checks)
    };
    match name {
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(one(s)?);
            }
            Ok(all)
        }
        n if SUITES.contains(&n) || n == "tomita" => one(n),
        other => Err(Error::Invalid(format!("unknown suite `{other}` ({}|tomita|all)", SUITES.join("|")))),
    }
}

struct Recorder {
    suite: String,
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, property: &str, f: impl FnOnce() -> Result<Status>) {
        let (status, detail) = match f() {
            Ok(s) => (s, String::new()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(Check { suite: self.suite.clone(), property: property.into(), status, detail });
    }
}

/// Exact equality, or agreement within `eps` once a side is inexact.
pub fn compare(a: &LambdaSeries<Value>, b: &LambdaSeries<Value>, eps: f64) -> Status {
    if a.is_exact() && b.is_exact() {
        Status::from_bool(a == b)
    } else if a.approx_eq(b, eps) {
        Status::Tolerance
    } else {
        Status::Fail
    }
}

fn worst(acc: &mut Status, s: Status) {
    *acc = (*acc).max(s);
}

/// Ultrametric, ordered-ring and valuation laws on random real series.
fn series_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc;
    let mut rng = sample::rng(cfg.seed);
    let triples: Vec<_> = (0..cfg.samples * 10)
        .map(|_| {
            (
                sample::real_series(&mut rng, -2, n),
                sample::real_series(&mut rng, -2, n),
                sample::real_series(&mut rng, -2, n),
            )
        })
        .collect();
    out.check("ultrametric inequality", || {
        let mut ok = true;
        for (a, b, c) in &triples {
            ok &= a.distance(c)? <= a.distance(b)?.max(b.distance(c)?);
        }
        Ok(Status::from_bool(ok))
    });
    out.check("strong triangle inequality", || {
        let ok = triples.iter().all(|(a, b, _)| (a + b).abs_lambda() <= a.abs_lambda().max(b.abs_lambda()));
        Ok(Status::from_bool(ok))
    });
    out.check("ordered-ring trichotomy", || {
        let ok = triples.iter().all(|(a, _, _)| {
            let s = ordered_sign(a);
            s == -ordered_sign(&-a.clone()) && ((s == 0) == a.is_zero())
        });
        Ok(Status::from_bool(ok))
    });
    out.check("positivity is stable under higher-order perturbation", || {
        let ok = triples.iter().all(|(a, b, _)| {
            if ordered_sign(a) <= 0 || b.order() <= a.order() {
                return true;
            }
            ordered_sign(&(a + b)) > 0
        });
        Ok(Status::from_bool(ok))
    });
    out.check("order is multiplicative", || {
        let mut ok = true;
        for (a, b, _) in &triples {
            if let (Order::Finite(x), Order::Finite(y)) = (a.order(), b.order()) {
                if x + y <= n {
                    ok &= a.checked_mul(b)?.order() == Order::Finite(x + y);
                }
            }
        }
        Ok(Status::from_bool(ok))
    });
    out.check("units of order zero invert", || {
        let mut ok = true;
        for (a, _, _) in &triples {
            if a.order() == Order::Finite(0) {
                let c = a.map(|r| crate::scalar::cq_real(r.clone()));
                ok &= c.checked_mul(&c.inverse()?)? == LambdaSeries::one(n);
            }
        }
        Ok(Status::from_bool(ok))
    });
}

/// The algebras the star suite runs on.
pub fn test_algebras(trunc: i32) -> Vec<StarAlgebra> {
    [
        (Chart::moyal(1), Product::Moyal),
        (Chart::wick(1), Product::Wick),
        (Chart::cotangent(1, Density::Lebesgue), Product::Standard),
        (Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl),
    ]
    .into_iter()
    .map(|(c, p)| StarAlgebra::new(c, p, trunc).expect("compatible chart"))
    .collect()
}

/// First-order part of `f ⋆ g - g ⋆ f` for λ-free `f, g`: `iλ{f, g}` on real
/// phase space, `2λ(∂_z f ∂_z̄ g - ∂_z̄ f ∂_z g)` on Wick space.
pub fn first_order_bracket(alg: &StarAlgebra, f: &O, g: &O) -> Result<O> {
    let chart = alg.chart();
    if alg.product() == Product::Wick {
        let mut acc = alg.zero();
        for k in 0..chart.n {
            let (z, zb) = (chart.z(k), chart.zbar(k));
            acc = acc.checked_add(&f.derive(z).checked_pointwise(&g.derive(zb))?)?;
            acc = acc.checked_sub(&f.derive(zb).checked_pointwise(&g.derive(z))?)?;
        }
        return Ok(acc.scale(&Cq::from_i64(2)).shift(1));
    }
    Ok(poisson(f, g)?.scale(&Cq::imag_unit()).shift(1))
}

fn below<C: Scalar>(f: &Observable<C>, e: i32) -> Observable<C> {
    f.map_parts(|p| p.below(e))
}

fn star_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc;
    let deg = cfg.deg;
    for alg in test_algebras(n) {
        let mut rng = sample::rng(cfg.seed);
        let shape = Shape::polynomial(deg);
        let triples: Vec<(O, O, O)> = (0..cfg.samples)
            .map(|_| {
                (
                    sample::observable(&mut rng, alg.chart(), n, &shape),
                    sample::observable(&mut rng, alg.chart(), n, &shape),
                    sample::observable(&mut rng, alg.chart(), n, &shape),
                )
            })
            .collect();
        let p = alg.product();
        out.check(&format!("{p}: associativity"), || {
            let mut ok = true;
            for (f, g, h) in &triples {
                ok &= alg.mul(&alg.mul(f, g)?, h)? == alg.mul(f, &alg.mul(g, h)?)?;
            }
            Ok(Status::from_bool(ok))
        });
        out.check(&format!("{p}: unit"), || {
            let one = alg.one();
            let ok = triples.iter().all(|(f, _, _)| {
                alg.mul(&one, f).ok().as_ref() == Some(f) && alg.mul(f, &one).ok().as_ref() == Some(f)
            });
            Ok(Status::from_bool(ok))
        });
        out.check(&format!("{p}: involution reverses products"), || {
            let mut ok = true;
            for (f, g, _) in &triples {
                let lhs = alg.involution(&alg.mul(f, g)?)?;
                let rhs = alg.mul(&alg.involution(g)?, &alg.involution(f)?)?;
                ok &= lhs == rhs && alg.involution(&alg.involution(f)?)? == *f;
            }
            Ok(Status::from_bool(ok))
        });
        out.check(&format!("{p}: zeroth and first order"), || {
            let mut rng = sample::rng(cfg.seed + 1);
            let flat = Shape { max_lambda: 0, ..Shape::polynomial(deg) };
            let mut ok = true;
            for _ in 0..cfg.samples {
                let f = sample::observable(&mut rng, alg.chart(), n, &flat);
                let g = sample::observable(&mut rng, alg.chart(), n, &flat);
                ok &= below(&alg.mul(&f, &g)?, 1) == below(&(&f * &g), 1);
                ok &= below(&alg.comm(&f, &g)?, 2) == first_order_bracket(&alg, &f, &g)?;
            }
            Ok(Status::from_bool(ok))
        });
    }
    let std = StarAlgebra::new(Chart::cotangent(1, Density::Lebesgue), Product::Standard, n).expect("std chart");
    out.check("std: homogeneity is a derivation", || {
        let mut rng = sample::rng(cfg.seed + 2);
        let shape = Shape::polynomial(deg);
        let mut ok = true;
        for _ in 0..cfg.samples {
            let f = sample::observable(&mut rng, std.chart(), n, &shape);
            let g = sample::observable(&mut rng, std.chart(), n, &shape);
            ok &= homogeneity_check(&std, &f, &g)?;
        }
        Ok(Status::from_bool(ok))
    });
    let weyl = StarAlgebra::new(Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl, n).expect("weyl chart");
    out.check("N operator inverts", || {
        let mut rng = sample::rng(cfg.seed + 3);
        let mut ok = true;
        for _ in 0..cfg.samples {
            let f = sample::observable(&mut rng, weyl.chart(), n, &Shape::polynomial(deg));
            ok &= n_operator(&n_operator(&f, Direction::Forward)?, Direction::Inverse)? == f;
        }
        Ok(Status::from_bool(ok))
    });
    let moyal = StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).expect("moyal chart");
    let h = parse_in(&moyal, "lam*(q1^2 + p1^2) + lam*q1").expect("static hamiltonian");
    out.check("star exponential solves its ODE", || {
        let c = star_exp_coefficients(&moyal, &h)?;
        let mut ok = c[0] == moyal.one();
        for k in 0..c.len() {
            let lhs = moyal.mul(&h, &c[k])?;
            let rhs = match c.get(k + 1) {
                Some(next) => next.scale(&Cq::from_i64(k as i64 + 1)),
                None => moyal.zero(),
            };
            ok &= lhs == rhs && moyal.mul(&c[k], &h)? == lhs;
        }
        Ok(Status::from_bool(ok))
    });
    out.check("star exponential group law", || {
        let (a, b) = (rat(1, 2), rat(-4, 3));
        let lhs = moyal.mul(&star_exp_rational(&moyal, &h, &a)?, &star_exp_rational(&moyal, &h, &b)?)?;
        let zero = star_exp_rational(&moyal, &h, &Rational::zero())?;
        Ok(Status::from_bool(lhs == star_exp_rational(&moyal, &h, &(a + b))? && zero == moyal.one()))
    });
}

/// `⟨A u, v⟩ = ⟨u, A* v⟩` on all pairs from `basis`.
pub fn adjoint_relation(op: &OperatorExpr<Cq>, gns: &Gns<Cq>, basis: &[O], eps: f64) -> Result<Status> {
    let adj = adjoint(op, gns)?;
    let mut st = Status::Exact;
    for u in basis {
        let au = apply(op, gns, u)?;
        for v in basis {
            let lhs = gns.inner(&au, v)?;
            let rhs = gns.inner(u, &apply(&adj, gns, v)?)?;
            worst(&mut st, compare(&lhs, &rhs, eps));
        }
    }
    Ok(st)
}

fn gns_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc;
    let d = cfg.deg;
    let eps = cfg.eps;
    let plane = StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).expect("moyal chart");
    out.check("trace property", || {
        let tr = PositiveFunctional::trace(&plane)?;
        let mut rng = sample::rng(cfg.seed);
        let shape = Shape::gaussian(d.min(3), int(1));
        let mut st = Status::Exact;
        for _ in 0..cfg.samples {
            let f = sample::observable(&mut rng, plane.chart(), n, &shape);
            let g = sample::observable(&mut rng, plane.chart(), n, &shape);
            worst(&mut st, compare(&tr.eval(&plane.mul(&f, &g)?)?, &tr.eval(&plane.mul(&g, &f)?)?, eps));
        }
        Ok(st)
    });
    let wick = StarAlgebra::new(Chart::wick(1), Product::Wick, n.min(4)).expect("wick chart");
    let fock = PositiveFunctional::<Cq>::delta0(&wick).and_then(|w| Gns::new(&w));
    out.check("delta: Gel'fand ideal closed form", || {
        let g = fock.clone()?;
        let ok = g.algebra_basis(d).iter().map(|f| g.gelfand(f, eps)).collect::<Result<Vec<_>>>()?;
        Ok(Status::from_bool(ok.iter().all(|r| r.consistent())))
    });
    out.check("Bargmann-Fock action matches the quotient", || {
        let g = fock.clone()?;
        let basis = g.algebra_basis(d.min(3));
        let mut ok = true;
        for f in &basis {
            for h in &basis {
                ok &= g.left(f, &g.reduce(h)?)? == g.left_via_quotient(f, h)?;
            }
        }
        Ok(Status::from_bool(ok))
    });
    let weyl = StarAlgebra::new(Chart::cotangent(1, Density::Gaussian(int(1))), Product::Weyl, n.min(4))
        .expect("weyl chart");
    let schr = PositiveFunctional::schrodinger(&weyl).and_then(|w| Gns::new(&w));
    out.check("Schrödinger action matches the quotient", || {
        let g = schr.clone()?;
        let basis = g.algebra_basis(d.min(3));
        let mut ok = true;
        for f in &basis {
            for h in &basis {
                ok &= g.left(f, &g.reduce(h)?)? == g.left_via_quotient(f, h)?;
            }
        }
        Ok(Status::from_bool(ok))
    });
    out.check("Schrödinger representation is symmetric", || {
        let g = schr.clone()?;
        let basis = g.vector_basis(d.min(3));
        let mut st = Status::Exact;
        for name in ["q1", "p1"] {
            let f: O = weyl.var(name)?;
            worst(&mut st, adjoint_relation(&OperatorExpr::Left(f), &g, &basis, eps)?);
        }
        Ok(st)
    });
    out.check("inner product is Hermitian and positive", || {
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&plane)?)?;
        let basis = g.algebra_basis(d.min(2));
        let mut st = Status::Exact;
        for u in &basis {
            for v in &basis {
                let uv = g.inner(u, v)?;
                let vu = g.inner(v, u)?.map(Value::conj);
                worst(&mut st, compare(&uv, &vu, eps));
            }
            if g.inner(u, u)?.re_sign(eps) < 0 {
                st = Status::Fail;
            }
        }
        Ok(st)
    });
}

fn oper_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc;
    let d = cfg.deg.min(3);
    let eps = cfg.eps;
    out.check("Fock commutant is trivial", || {
        let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, n.min(4))?;
        let g = Gns::new(&PositiveFunctional::delta0(&alg)?)?;
        let gens = vec![OperatorExpr::Left(alg.var("z1")?), OperatorExpr::Left(alg.var("zbar1")?)];
        Ok(Status::from_bool(commutant_probe(&gens, &g, d, 0)?.dimension == 1))
    });
    out.check("Schrödinger commutant counts components", || {
        let mut ok = true;
        for m in [1usize, 2] {
            let chart = Chart::cotangent(1, Density::Gaussian(int(1))).with_components(m);
            let t = n.min(4);
            let alg = StarAlgebra::new(chart.clone(), Product::Weyl, t)?;
            let g = Gns::new(&PositiveFunctional::<Cq>::schrodinger(&alg)?)?;
            let gens = vec![
                OperatorExpr::Left(alg.var("q1")?),
                OperatorExpr::Left(alg.var("p1")?),
                OperatorExpr::Left(O::indicator(&chart, t, &[0].into())),
            ];
            ok &= commutant_probe(&gens, &g, d, 0)?.dimension == m;
        }
        Ok(Status::from_bool(ok))
    });
    let plane = StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).expect("moyal chart");
    out.check("trace model: adjoints of left and right multiplications", || {
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&plane)?)?;
        let basis = g.algebra_basis(d.min(2));
        let f = parse_in(&plane, "q1 + i*p1^2 + lam*q1*p1")?;
        let mut st = adjoint_relation(&OperatorExpr::Left(f.clone()), &g, &basis, eps)?;
        worst(&mut st, adjoint_relation(&OperatorExpr::Right(f), &g, &basis, eps)?);
        Ok(st)
    });
    out.check("KMS model: adjoint of right multiplications", || {
        let t = n.min(4);
        let alg = plane.with_trunc(t);
        let h = parse_in(&alg, "lam*(q1^2 + p1^2)")?;
        let g = Gns::new(&PositiveFunctional::kms(&alg, &h, int(1))?)?;
        let basis = g.algebra_basis(1);
        let f = parse_in(&alg, "q1 + i*p1")?;
        adjoint_relation(&OperatorExpr::Right(f), &g, &basis, eps)
    });
    out.check("(i/lam) ad(p) is the q-derivative", || {
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&plane)?)?;
        let p: O = plane.var("p1")?;
        let i_over_lam = LambdaSeries::monomial(-1, Cq::imag_unit(), n);
        let dq = OperatorExpr::Scale(i_over_lam).then_after(OperatorExpr::ad(&p));
        let mut ok = true;
        for u in g.vector_basis(d) {
            ok &= apply(&dq, &g, &u)? == u.derive(0);
        }
        Ok(Status::from_bool(ok))
    });
    out.check("superselection: projectors are local and non-scalar", || {
        let chart = Chart::moyal(1).with_components(2);
        let t = n.min(4);
        let alg = StarAlgebra::new(chart.clone(), Product::Moyal, t)?;
        let w = LambdaSeries::one(t);
        let omega = PositiveFunctional::convex(vec![
            (w.clone(), PositiveFunctional::trace_on(&alg, [0].into())?),
            (w, PositiveFunctional::trace_on(&alg, [1].into())?),
        ])?;
        let g = Gns::new(&omega)?;
        let basis = g.algebra_basis(d.min(2));
        // Same monomial on both components: no projector acts on it as a scalar.
        let spread = basis[0].checked_add(&basis[basis.len() / 2])?;
        let summands = g.direct_sum();
        let mut ok = summands.len() == 2;
        let gens = [alg.var::<Cq>("q1")?, alg.var("p1")?];
        for (_, ind) in &summands {
            let proj = OperatorExpr::Left(ind.clone());
            ok &= is_local(&proj, &g, d.min(2))?;
            for f in &gens {
                for u in &basis {
                    let a = apply(&proj, &g, &g.left(f, u)?)?;
                    ok &= a == g.left(f, &apply(&proj, &g, u)?)?;
                }
            }
            let pu = apply(&proj, &g, &spread)?;
            ok &= !pu.is_zero() && pu != spread;
        }
        for u in basis.iter().chain([&spread]) {
            let parts = g.split(u);
            let sum = parts.iter().try_fold(g.zero_vector(), |a, b| a.checked_add(b))?;
            ok &= sum == *u && g.inner(&parts[0], &parts[1])?.is_zero();
        }
        Ok(Status::from_bool(ok))
    });
}

fn modular_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc.min(4);
    let d = cfg.deg;
    let eps = cfg.eps;
    let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).expect("moyal chart");
    let h_text = cfg.hamiltonian.clone().unwrap_or_else(|| "lam*(q1^2 + p1^2)".into());
    let beta = cfg.beta.clone().unwrap_or_else(|| int(2));
    let md = match parse_in(&alg, &h_text).and_then(|h| ModularData::new(&alg, &h, beta.clone())) {
        Ok(md) => md,
        Err(e) => {
            out.check("modular data", || Err(e));
            return;
        }
    };
    let basis: Vec<O> = monomials_up_to(2, d)
        .into_iter()
        .map(|m| O::monomial(alg.chart(), n, m).scale(&crate::scalar::cq(int(1), int(1))))
        .collect();
    let half = rat(1, 2);
    let each = |f: &dyn Fn(&O) -> Result<bool>| -> Result<Status> {
        let mut ok = true;
        for u in &basis {
            ok &= f(u)?;
        }
        Ok(Status::from_bool(ok))
    };
    out.check("S^2 = F^2 = J^2 = id", || each(&|u| Ok(md.s(&md.s(u)) == *u && md.f(&md.f(u)?)? == *u && md.j(&md.j(u)?)? == *u)));
    out.check("J = S Delta^(-1/2)", || each(&|u| Ok(md.j(u)? == md.s(&md.delta_pow(&-half.clone(), u)?))));
    out.check("F = Delta S", || each(&|u| Ok(md.f(u)? == md.delta_pow(&Rational::one(), &md.s(u))?)));
    out.check("Delta^z Delta^z' = Delta^(z+z')", || {
        let (z, w) = (rat(1, 3), rat(-5, 4));
        each(&|u| Ok(md.delta_pow(&z, &md.delta_pow(&w, u)?)? == md.delta_pow(&(z.clone() + w.clone()), u)?))
    });
    out.check("J Delta^(1/2) J = Delta^(-1/2)", || {
        each(&|u| Ok(md.j(&md.delta_pow(&half, &md.j(u)?)?)? == md.delta_pow(&-half.clone(), u)?))
    });
    out.check("Delta = exp(-beta ad H)", || each(&|u| Ok(md.delta_via_log(u)? == md.delta_pow(&Rational::one(), u)?)));
    out.check("J L_f J is the right multiplication by E(-1/2) conj(f) E(1/2)", || {
        let probes: Vec<O> = basis.iter().take(6).cloned().collect();
        let mut ok = true;
        for f in basis.iter().take(6) {
            let (_, rep) = md.modular_conjugate_left(f, &probes)?;
            ok &= rep.plus_matches && rep.commutes && !rep.minus_matches;
        }
        Ok(Status::from_bool(ok))
    });
    out.check("U_t group law", || {
        let (s, t) = (rat(1, 2), rat(2, 3));
        each(&|u| {
            Ok(md.modular_group(&s, &md.modular_group(&t, u)?)? == md.modular_group(&(s.clone() + t.clone()), u)?
                && md.modular_group(&Rational::zero(), u)? == *u)
        })
    });
    // Inner-product properties need integrable vectors.
    let kms = PositiveFunctional::kms(&alg, md.hamiltonian(), beta.clone()).and_then(|w| Gns::new(&w));
    out.check("<f, Delta f> >= 0 and J is anti-unitary", || {
        let g = kms.clone()?;
        let vb = g.algebra_basis(d.min(2));
        let mut st = Status::Exact;
        for f in &vb {
            if g.inner(f, &md.delta_pow(&Rational::one(), f)?)?.re_sign(eps) < 0 {
                st = Status::Fail;
            }
            let jf = md.j(f)?;
            for h in &vb {
                worst(&mut st, compare(&g.inner(&jf, &md.j(h)?)?, &g.inner(h, f)?, eps));
            }
        }
        Ok(st)
    });
    out.check("U_t is unitary", || {
        let g = kms.clone()?;
        let vb = g.algebra_basis(d.min(2));
        let t = rat(3, 5);
        let mut st = Status::Exact;
        for f in &vb {
            let uf = md.modular_group(&t, f)?;
            for h in &vb {
                worst(&mut st, compare(&g.inner(&uf, &md.modular_group(&t, h)?)?, &g.inner(f, h)?, eps));
            }
        }
        Ok(st)
    });
    out.check("Delta^z L_f Delta^(-z) = L_(Delta^z f)", || {
        let g = kms.clone()?;
        let vb = g.vector_basis(d.min(2));
        let mut ok = true;
        for f in basis.iter().take(6) {
            for u in &vb {
                let (lhs, rhs) = conjugated_left(&md, &g, &half, f, u)?;
                ok &= lhs == rhs;
            }
        }
        Ok(Status::from_bool(ok))
    });
}

fn topo_suite(cfg: &Config, out: &mut Recorder) {
    let n = cfg.trunc.min(4);
    let m = 16;
    let alg = StarAlgebra::new(Chart::moyal(1).with_components(m), Product::Moyal, n).expect("moyal chart");
    let gns = PositiveFunctional::<Cq>::trace(&alg).and_then(|w| Gns::new(&w));
    out.check("bump family: strongly to zero, not lambda-adically", || {
        let g = gns.clone()?;
        let seq = |k: usize| OperatorExpr::Left(bump_indicator(&alg, k));
        let zero = OperatorExpr::Scale(LambdaSeries::zero(n));
        let probes: Vec<O> = g.vector_basis(1).into_iter().filter(|u| !u.support().contains(&(m - 1))).collect();
        let strong = strong_converges(&seq, &zero, &probes, &g, 32)?.converges;
        let adic = lambda_adic_converges(&seq, &zero, &g, 1, 32)?.converges;
        Ok(Status::from_bool(strong && !adic))
    });
    out.check("orders -2n are unbounded", || {
        let g = gns.clone()?;
        let seq = |k: usize| OperatorExpr::Scale(LambdaSeries::monomial(-2 * k as i32, Cq::one(), n));
        Ok(Status::from_bool(matches!(strong_limit(&seq, &g.vector_basis(1), &g, 8), Err(Error::UnboundedOrder(_)))))
    });
    out.check("left and right multiplications realize differential operators", || {
        let plane = StarAlgebra::new(Chart::moyal(1), Product::Moyal, cfg.trunc)?;
        let mut rng = sample::rng(cfg.seed);
        let mut ok = true;
        for _ in 0..cfg.samples.min(3) {
            let dop: DiffOp<Cq> = sample::diffop(&mut rng, plane.chart(), cfg.trunc, 2, 2);
            let s = alr_synthesize(&dop, cfg.trunc, &plane, cfg.deg.min(3))?;
            ok &= s.verified_order >= Order::Finite(cfg.trunc);
        }
        Ok(Status::from_bool(ok))
    });
}
