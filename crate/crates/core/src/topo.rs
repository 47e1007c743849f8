//! Operator topologies on finite probe sets, and synthesis of differential
//! operators from left and right multiplications.
//!
//! Verdicts are certified on a prefix `0..=n_max` of a sequence: a sequence
//! converges on a probe if the difference to the limit vanishes on the whole
//! second half of the prefix, and diverges if it is constant and nonzero
//! there. Anything else is inconclusive.

use std::collections::BTreeSet;

use crate::coeffs::{ChartKind, Mono, Observable};
use crate::error::{Error, Result};
use crate::gns::{Gns, PositiveFunctional};
use crate::oper::{adjoint, apply, DiffOp, OperatorExpr};
use crate::scalar::Scalar;
use crate::series::{LambdaSeries, Order};
use crate::star::{Product, StarAlgebra};

/// A closed-form operator family `n ↦ A_n`.
pub type Family<'a, C> = &'a dyn Fn(usize) -> OperatorExpr<C>;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub converges: bool,
    /// `o(A_n ψ - A ψ)` for each probe and `n = 0..=n_max`.
    pub profiles: Vec<Vec<Order>>,
}

enum Tail {
    Zero,
    ConstantNonzero,
    Other,
}

fn classify<C: Scalar>(diffs: &[Observable<C>]) -> Tail {
    let tail = &diffs[diffs.len() / 2..];
    if tail.iter().all(Observable::is_zero) {
        Tail::Zero
    } else if tail.windows(2).all(|w| w[0] == w[1]) {
        Tail::ConstantNonzero
    } else {
        Tail::Other
    }
}

fn verdict<C: Scalar>(
    seq: Family<'_, C>,
    limit: &OperatorExpr<C>,
    probes: &[Observable<C>],
    gns: &Gns<C>,
    n_max: usize,
) -> Result<ConvergenceReport> {
    if probes.is_empty() {
        return Err(Error::Invalid("no probe vectors".into()));
    }
    let mut converges = true;
    let mut profiles = Vec::new();
    for (k, f) in probes.iter().enumerate() {
        let target = apply(limit, gns, f)?;
        let diffs = (0..=n_max)
            .map(|n| apply(&seq(n), gns, f).and_then(|v| v.checked_sub(&target)))
            .collect::<Result<Vec<_>>>()?;
        profiles.push(diffs.iter().map(Observable::order).collect());
        match classify(&diffs) {
            Tail::Zero => {}
            Tail::ConstantNonzero => converges = false,
            Tail::Other => {
                return Err(Error::InconclusivePrefix(format!("probe {k} has not settled by n = {n_max}")));
            }
        }
    }
    Ok(ConvergenceReport { converges, profiles })
}

/// `A_n ψ → A ψ` λ-adically for every probe `ψ`.
pub fn strong_converges<C: Scalar>(
    seq: Family<'_, C>,
    limit: &OperatorExpr<C>,
    probes: &[Observable<C>],
    gns: &Gns<C>,
    n_max: usize,
) -> Result<ConvergenceReport> {
    verdict(seq, limit, probes, gns, n_max)
}

/// `A_n → A` uniformly over every basis vector of degree at most `d` on every
/// component.
pub fn lambda_adic_converges<C: Scalar>(
    seq: Family<'_, C>,
    limit: &OperatorExpr<C>,
    gns: &Gns<C>,
    d: u32,
    n_max: usize,
) -> Result<ConvergenceReport> {
    verdict(seq, limit, &gns.vector_basis(d), gns, n_max)
}

/// Strong convergence of both `A_n` and `A_n*`.
pub fn star_strong_converges<C: Scalar>(
    seq: Family<'_, C>,
    limit: &OperatorExpr<C>,
    probes: &[Observable<C>],
    gns: &Gns<C>,
    n_max: usize,
) -> Result<bool> {
    if !strong_converges(seq, limit, probes, gns, n_max)?.converges {
        return Ok(false);
    }
    let adjoints = (0..=n_max).map(|n| adjoint(&seq(n), gns)).collect::<Result<Vec<_>>>()?;
    let adj_seq = |n: usize| adjoints[n].clone();
    Ok(strong_converges(&adj_seq, &adjoint(limit, gns)?, probes, gns, n_max)?.converges)
}

/// Limit of a strongly Cauchy sequence on the probes. Fails with
/// `UnboundedOrder` when the orders of `A_n ψ` keep dropping, the scenario
/// excluded for Cauchy sequences.
pub fn strong_limit<C: Scalar>(
    seq: Family<'_, C>,
    probes: &[Observable<C>],
    gns: &Gns<C>,
    n_max: usize,
) -> Result<OperatorExpr<C>> {
    let images: Vec<Vec<Observable<C>>> = probes
        .iter()
        .map(|f| (0..=n_max).map(|n| apply(&seq(n), gns, f)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let orders: Vec<i32> = (0..=n_max)
        .map(|n| images.iter().filter_map(|v| v[n].order().finite()).min().unwrap_or(i32::MAX))
        .collect();
    let tail = &orders[orders.len() / 2..];
    if tail.len() > 1 && tail.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::UnboundedOrder(format!("orders {:?} decrease without bound", tail)));
    }
    eventual(seq, &images, n_max)
}

/// Limit in the finite topology: eventual exact agreement on every probe.
pub fn finite_topology_limit<C: Scalar>(
    seq: Family<'_, C>,
    probes: &[Observable<C>],
    gns: &Gns<C>,
    n_max: usize,
) -> Result<OperatorExpr<C>> {
    let images: Vec<Vec<Observable<C>>> = probes
        .iter()
        .map(|f| (0..=n_max).map(|n| apply(&seq(n), gns, f)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    eventual(seq, &images, n_max)
}

fn eventual<C: Scalar>(seq: Family<'_, C>, images: &[Vec<Observable<C>>], n_max: usize) -> Result<OperatorExpr<C>> {
    for (k, v) in images.iter().enumerate() {
        let tail = &v[v.len() / 2..];
        if !tail.windows(2).all(|w| w[0] == w[1]) {
            return Err(Error::NotCauchy(format!("probe {k} does not settle by n = {n_max}")));
        }
    }
    Ok(seq(n_max))
}

/// Component indicators `χ_n` of the translated-bump example on an
/// `m`-component chart: `χ_n` is the indicator of component `min(n, m-1)`.
pub fn bump_indicator<C: Scalar>(alg: &StarAlgebra, n: usize) -> Observable<C> {
    let m = alg.chart().components;
    Observable::indicator(alg.chart(), alg.trunc(), &[n.min(m - 1)].into())
}

/// Indicator of components `0..=n` (capped at `m-1`).
pub fn exhaustion<C: Scalar>(alg: &StarAlgebra, n: usize) -> Observable<C> {
    let m = alg.chart().components;
    let set: BTreeSet<usize> = (0..=n.min(m - 1)).collect();
    Observable::indicator(alg.chart(), alg.trunc(), &set)
}

/// `L_{χ_0} ∘ swap(0, c_n)` with `c_n = min(n+1, m-1)`: strongly convergent
/// to zero while the adjoints carry mass off to the last component.
pub fn divergent_adjoint_member<C: Scalar>(alg: &StarAlgebra, n: usize) -> OperatorExpr<C> {
    let m = alg.chart().components;
    let chi0 = Observable::indicator(alg.chart(), alg.trunc(), &[0].into());
    OperatorExpr::Left(chi0).then_after(OperatorExpr::swap(m, 0, (n + 1).min(m - 1)))
}

/// Outcome of [`alr_synthesize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis<C> {
    pub witness: OperatorExpr<C>,
    /// `min o((D - A) ψ)` over the probe basis.
    pub verified_order: Order,
    pub iterations: usize,
}

fn partial_chain<C: Scalar>(alg: &StarAlgebra, alpha: &Mono) -> Result<Vec<OperatorExpr<C>>> {
    let chart = alg.chart();
    let n = chart.n;
    let trunc = alg.trunc();
    let i = C::imag_unit();
    let mut out = Vec::new();
    for v in 0..chart.nvars() {
        for _ in 0..alpha.exp(v) {
            // ∂_q = (i/λ) ad(p), ∂_p = (-i/λ) ad(q).
            let (coord, c) = if v < n { (chart.p(v), i.clone()) } else { (chart.q(v - n), -i.clone()) };
            let x = Observable::var(chart, trunc, coord);
            out.push(OperatorExpr::Scale(LambdaSeries::monomial(-1, c, trunc)));
            out.push(OperatorExpr::ad(&x));
        }
    }
    Ok(out)
}

/// Realize `D = Σ c_α ∂^α` on the Moyal plane by left and right
/// multiplications up to λ-order `k`, iterating on the residual
/// `Σ (c_α - L_{c_α}) ∂^α`.
pub fn alr_synthesize<C: Scalar>(d: &DiffOp<C>, k: i32, alg: &StarAlgebra, probe_degree: u32) -> Result<Synthesis<C>> {
    if alg.product() != Product::Moyal || alg.chart().kind != ChartKind::MoyalPlane {
        return Err(Error::UnsupportedChart(format!("synthesis on {} with the {} product", alg.chart(), alg.product())));
    }
    let n = alg.trunc();
    let depth = d.max_derivative() as i32;
    if k > n + depth {
        return Err(Error::OrderBudgetExceeded { requested: k, budget: n + depth });
    }
    let chart = alg.chart();
    let mut residual = d.with_trunc(n);
    let mut terms = Vec::new();
    let mut iterations = 0;
    while !residual.is_zero() && residual.order().finite().is_some_and(|o| o < k) && iterations <= (n + 1) as usize {
        iterations += 1;
        let mut next = residual.clone();
        for (alpha, c) in residual.terms() {
            let mut chain = vec![OperatorExpr::Left(Observable::uniform(chart, c.clone()))];
            chain.extend(partial_chain(alg, alpha)?);
            terms.push(OperatorExpr::Compose(chain));
            for (beta, s) in alg.left_symbol(c, 0)? {
                let mut t = DiffOp::zero(chart.nvars(), n);
                t.add_term(beta.mul(alpha), &s);
                next = next.sub(&t);
            }
        }
        residual = next;
    }
    let witness = OperatorExpr::Sum(terms);
    let gns = Gns::new(&PositiveFunctional::trace(alg)?)?;
    let mut verified = Order::Infinity;
    for u in gns.vector_basis(probe_degree) {
        let diff = d.with_trunc(n).apply(&u)?.checked_sub(&apply(&witness, &gns, &u)?)?;
        verified = verified.min(diff.order());
    }
    Ok(Synthesis { witness, verified_order: verified, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Chart, Frame, GaussPoly};
    use crate::scalar::{cq_int, Cq};

    type O = Observable<Cq>;

    fn component_model(m: usize) -> (StarAlgebra, Gns<Cq>) {
        let alg = StarAlgebra::new(Chart::moyal(1).with_components(m), Product::Moyal, 4).unwrap();
        let gns = Gns::new(&PositiveFunctional::trace(&alg).unwrap()).unwrap();
        (alg, gns)
    }

    #[test]
    fn bump_family_is_strong_not_lambda_adic() {
        let (alg, gns) = component_model(6);
        let seq = |n: usize| OperatorExpr::Left(bump_indicator(&alg, n));
        let zero = OperatorExpr::Scale(LambdaSeries::zero(4));
        let probes: Vec<O> = gns.vector_basis(1).into_iter().filter(|u| !u.support().contains(&5)).collect();
        assert!(strong_converges(&seq, &zero, &probes, &gns, 12).unwrap().converges);
        assert!(!lambda_adic_converges(&seq, &zero, &gns, 1, 12).unwrap().converges);
        assert!(star_strong_converges(&seq, &zero, &probes, &gns, 12).unwrap());
    }

    #[test]
    fn divergent_adjoints() {
        let (alg, gns) = component_model(5);
        let seq = |n: usize| divergent_adjoint_member::<Cq>(&alg, n);
        let zero = OperatorExpr::Scale(LambdaSeries::zero(4));
        let probes: Vec<O> = gns.vector_basis(1).into_iter().filter(|u| !u.support().contains(&4)).collect();
        assert!(strong_converges(&seq, &zero, &probes, &gns, 10).unwrap().converges);
        assert!(!star_strong_converges(&seq, &zero, &probes, &gns, 10).unwrap());
    }

    #[test]
    fn limits() {
        let (alg, gns) = component_model(4);
        let probes = gns.vector_basis(1);
        let unbounded = |n: usize| OperatorExpr::Scale(LambdaSeries::monomial(-2 * n as i32, cq_int(1), 4));
        assert!(matches!(strong_limit(&unbounded, &probes, &gns, 6), Err(Error::UnboundedOrder(_))));
        let l = OperatorExpr::Left(alg.var::<Cq>("q1").unwrap());
        let exhaust = |n: usize| OperatorExpr::Left(exhaustion(&alg, n)).then_after(l.clone());
        let lim = finite_topology_limit(&exhaust, &probes, &gns, 8).unwrap();
        for u in &probes {
            assert_eq!(apply(&lim, &gns, u).unwrap(), apply(&l, &gns, u).unwrap());
        }
        let alternating = |n: usize| if n.is_multiple_of(2) { OperatorExpr::Id } else { l.clone() };
        assert!(matches!(finite_topology_limit(&alternating, &probes, &gns, 8), Err(Error::NotCauchy(_))));
    }

    #[test]
    fn synthesize_derivatives() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
        let dq = DiffOp::<Cq>::derivative(2, 4, Mono::from_exps(&[1, 0]));
        let s = alr_synthesize(&dq, 4, &alg, 3).unwrap();
        assert_eq!(s.verified_order, Order::Infinity);
        let q = LambdaSeries::constant(GaussPoly::<Cq>::var(Frame::real(2), 0), 4);
        let qdp = DiffOp::multiplication(2, q).compose(&DiffOp::derivative(2, 4, Mono::from_exps(&[0, 1])));
        let s = alr_synthesize(&qdp, 4, &alg, 3).unwrap();
        assert!(s.verified_order >= Order::Finite(4), "{:?}", s.verified_order);
        assert!(matches!(alr_synthesize(&dq, 9, &alg, 2), Err(Error::OrderBudgetExceeded { .. })));
    }
}
