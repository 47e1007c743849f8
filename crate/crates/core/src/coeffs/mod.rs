//! Coefficient algebras: polynomials, Gaussian-weighted polynomials, charts
//! and the observables built from them.

pub mod chart;
pub mod gauss;
pub mod observable;
pub mod poly;

pub use chart::{Chart, ChartKind, Density};
pub use gauss::{Frame, GaussPoly};
pub use observable::{Observable, Part};
pub use poly::{monomials_up_to, Mono, Poly};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `∂_v f` for a named chart variable.
pub fn derive_named<C: Scalar>(f: &Observable<C>, var: &str) -> Result<Observable<C>> {
    let v = f.chart().var_index(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    Ok(f.derive(v))
}

/// Poisson bracket `Σ_k ∂f/∂q_k ∂g/∂p_k - ∂f/∂p_k ∂g/∂q_k` on real
/// phase-space charts.
pub fn poisson<C: Scalar>(f: &Observable<C>, g: &Observable<C>) -> Result<Observable<C>> {
    let chart = f.chart().clone();
    if !chart.is_phase_space() {
        return Err(Error::UnsupportedChart(format!("Poisson bracket on {chart}")));
    }
    let mut out = Observable::zero(&chart, f.trunc());
    for k in 0..chart.n {
        let (q, p) = (chart.q(k), chart.p(k));
        out = out.checked_add(&f.derive(q).checked_pointwise(&g.derive(p))?)?;
        out = out.checked_sub(&f.derive(p).checked_pointwise(&g.derive(q))?)?;
    }
    Ok(out)
}

/// Poisson bracket on coefficient functions.
pub fn poisson_coeff<C: Scalar>(chart: &Chart, f: &GaussPoly<C>, g: &GaussPoly<C>) -> Result<GaussPoly<C>> {
    if !chart.is_phase_space() {
        return Err(Error::UnsupportedChart(format!("Poisson bracket on {chart}")));
    }
    let mut out = GaussPoly::zero(chart.frame());
    for k in 0..chart.n {
        let (q, p) = (chart.q(k), chart.p(k));
        out = out.add(&f.derive(q).mul(&g.derive(p)));
        out = out.sub(&f.derive(p).mul(&g.derive(q)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq_int, Cq};

    fn moyal() -> Chart {
        Chart::moyal(1)
    }

    #[test]
    fn canonical_bracket() {
        let c = moyal();
        let q = Observable::<Cq>::var(&c, 4, 0);
        let p = Observable::<Cq>::var(&c, 4, 1);
        assert_eq!(poisson(&q, &p).unwrap(), Observable::one(&c, 4));
        assert!(poisson(&q, &q).unwrap().is_zero());
        let q2 = &q * &q;
        assert_eq!(poisson(&q2, &p).unwrap(), q.scale(&cq_int(2)));
    }

    #[test]
    fn bracket_rejects_wick() {
        let c = Chart::wick(1);
        let z = Observable::<Cq>::var(&c, 4, 0);
        assert!(matches!(poisson(&z, &z), Err(Error::UnsupportedChart(_))));
    }

    #[test]
    fn derivative_by_name() {
        let c = moyal();
        let q3 = Observable::<Cq>::monomial(&c, 3, Mono::from_exps(&[3, 0]));
        assert!(derive_named(&q3, "p1").unwrap().is_zero());
        assert!(derive_named(&q3, "x1").is_err());
    }
}
