//! Canonical printing: terms ordered by λ-exponent, then Gaussian exponent,
//! then monomial; coefficients in the form of [`format_cq`](super::format_cq).

use num_traits::{One, Signed, Zero};

use crate::coeffs::{Chart, Mono, Observable, Part};
use crate::oper::DiffOp;
use crate::scalar::{Rational, Scalar, Value};
use crate::series::LambdaSeries;

/// Split a coefficient into a sign and its absolute value for printing.
fn split_sign(v: &Value) -> (bool, Value) {
    let neg = match v {
        Value::Exact { coeff, .. } => {
            if coeff.re.is_zero() {
                coeff.im.is_negative()
            } else {
                coeff.im.is_zero() && coeff.re.is_negative()
            }
        }
        Value::Float(c) => {
            if c.re == 0.0 {
                c.im < 0.0
            } else {
                c.im == 0.0 && c.re < 0.0
            }
        }
    };
    if neg {
        (true, v.neg_ref())
    } else {
        (false, v.clone())
    }
}

fn is_one(v: &Value) -> bool {
    match v {
        Value::Exact { coeff, pi_pow } => *pi_pow == 0 && coeff.is_one(),
        Value::Float(c) => c.re == 1.0 && c.im == 0.0,
    }
}

/// Join signed terms `(coefficient, factors)` into canonical text.
fn render(items: Vec<(Value, Vec<String>)>) -> String {
    let mut out = String::new();
    for (k, (c, factors)) in items.into_iter().enumerate() {
        let (neg, abs) = split_sign(&c);
        let body = if factors.is_empty() {
            abs.to_string()
        } else if is_one(&abs) {
            factors.join("*")
        } else {
            format!("{abs}*{}", factors.join("*"))
        };
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn lam_factor(e: i32) -> Option<String> {
    match e {
        0 => None,
        1 => Some("lam".into()),
        e => Some(format!("lam^{e}")),
    }
}

fn mono_factors(names: &[String], m: &Mono) -> Vec<String> {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { names[v].clone() } else { format!("{}^{e}", names[v]) })
        .collect()
}

fn gauss_factor(g: &Rational) -> Option<String> {
    if g.is_zero() {
        None
    } else {
        Some(format!("gauss({g})"))
    }
}

fn part_items<C: Scalar>(names: &[String], part: &Part<C>) -> Vec<(Value, Vec<String>)> {
    let mut items = Vec::new();
    for (e, g) in part.terms() {
        for (gamma, p) in g.blocks() {
            for (m, c) in p.terms() {
                let mut f: Vec<String> = lam_factor(e).into_iter().collect();
                f.extend(gauss_factor(gamma));
                f.extend(mono_factors(names, m));
                items.push((c.to_value(), f));
            }
        }
    }
    items
}

/// One component's coefficient series.
pub fn format_part<C: Scalar>(chart: &Chart, part: &Part<C>) -> String {
    render(part_items(&chart.var_names(), part))
}

/// Canonical text of an observable. Observables equal on every component
/// print as a single expression; otherwise as a sum of `comp(k, …)`.
pub fn format_observable<C: Scalar>(f: &Observable<C>) -> String {
    let parts = f.parts();
    if parts.iter().all(|p| p == &parts[0]) {
        return format_part(f.chart(), &parts[0]);
    }
    let pieces: Vec<String> = parts
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| format!("comp({}, {})", k + 1, format_part(f.chart(), p)))
        .collect();
    pieces.join(" + ")
}

/// A λ-scalar.
pub fn format_series<C: Scalar>(s: &LambdaSeries<C>) -> String {
    render(s.terms().map(|(e, c)| (c.to_value(), lam_factor(e).into_iter().collect())).collect())
}

/// A series of functional values, e.g. `pi + 1/2*pi*lam`.
pub fn format_values(s: &LambdaSeries<Value>) -> String {
    render(s.terms().map(|(e, c)| (c.clone(), lam_factor(e).into_iter().collect())).collect())
}

/// Differential operators in symbol form, e.g. `q1*dp1 + 1/2*i*lam*dq1^2`.
pub fn format_diffop<C: Scalar>(chart: &Chart, d: &DiffOp<C>) -> String {
    let names = chart.var_names();
    let dnames: Vec<String> = names.iter().map(|v| format!("d{v}")).collect();
    let mut items = Vec::new();
    for (alpha, c) in d.terms() {
        for (coeff, mut factors) in part_items(&names, c) {
            factors.extend(mono_factors(&dnames, alpha));
            items.push((coeff, factors));
        }
    }
    render(items)
}


/// Operator expressions: `L[f]`, `R[f]`, `D[...]`, `(s)`, sums with ` + `,
/// compositions with ` . ` (rightmost acts first).
pub fn format_operator<C: Scalar>(op: &crate::oper::OperatorExpr<C>, chart: &Chart) -> String {
    use crate::oper::OperatorExpr as E;
    match op {
        E::Id => "id".into(),
        E::Left(f) => format!("L[{}]", format_observable(f)),
        E::Right(f) => format!("R[{}]", format_observable(f)),
        E::Diff(d) => format!("D[{}]", format_diffop(chart, d)),
        E::Scale(s) => format!("({})", format_series(s)),
        E::Sum(v) if v.is_empty() => "0".into(),
        E::Sum(v) => {
            let inner: Vec<String> = v.iter().map(|a| format_operator(a, chart)).collect();
            if v.len() == 1 {
                inner[0].clone()
            } else {
                format!("({})", inner.join(" + "))
            }
        }
        E::Compose(v) => v.iter().map(|a| format_operator(a, chart)).collect::<Vec<_>>().join(" . "),
        E::Adjoint(a) => format!("adj({})", format_operator(a, chart)),
        E::Permute(p) => {
            let to: Vec<String> = p.iter().map(|k| (k + 1).to_string()).collect();
            format!("P[{}]", to.join(","))
        }
    }
}
