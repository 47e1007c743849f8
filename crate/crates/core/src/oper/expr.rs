//! Operator expressions on GNS spaces.

use crate::coeffs::Observable;
use crate::error::{Error, Result};
use crate::gns::{Gns, ModelKind};
use crate::scalar::Scalar;
use crate::series::{LambdaSeries, Order};

use super::diffop::DiffOp;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr<C> {
    Id,
    /// `π(f)`.
    Left(Observable<C>),
    /// `ψ_g ↦ ψ_{g ⋆ f}`.
    Right(Observable<C>),
    /// A differential operator on the vector chart.
    Diff(DiffOp<C>),
    /// Multiplication by a λ-scalar (Laurent exponents allowed).
    Scale(LambdaSeries<C>),
    Sum(Vec<OperatorExpr<C>>),
    /// `ops[0] ∘ ops[1] ∘ …`; the last one acts first.
    Compose(Vec<OperatorExpr<C>>),
    Adjoint(Box<OperatorExpr<C>>),
    /// Moves component `k` to component `perm[k]`.
    Permute(Vec<usize>),
}

impl<C: Scalar> OperatorExpr<C> {
    pub fn scalar(c: C, trunc: i32) -> Self {
        OperatorExpr::Scale(LambdaSeries::constant(c, trunc))
    }

    /// `L_f - R_f`.
    pub fn ad(f: &Observable<C>) -> Self {
        OperatorExpr::Left(f.clone()).minus(OperatorExpr::Right(f.clone()), f.trunc())
    }

    pub fn plus(self, other: Self) -> Self {
        OperatorExpr::Sum(vec![self, other])
    }

    pub fn minus(self, other: Self, trunc: i32) -> Self {
        let neg = OperatorExpr::Compose(vec![Self::scalar(-C::one(), trunc), other]);
        OperatorExpr::Sum(vec![self, neg])
    }

    /// `self ∘ other`.
    pub fn then_after(self, other: Self) -> Self {
        OperatorExpr::Compose(vec![self, other])
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn commutator(&self, other: &Self, trunc: i32) -> Self {
        self.clone().then_after(other.clone()).minus(other.clone().then_after(self.clone()), trunc)
    }

    /// Exchange components `a` and `b` of an `m`-component chart.
    pub fn swap(m: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..m).collect();
        perm.swap(a, b);
        OperatorExpr::Permute(perm)
    }

    /// Lowest λ-exponent the expression can introduce (zero or negative).
    fn min_shift(&self) -> i32 {
        let of = |o: Order| o.finite().map_or(0, |o| o.min(0));
        match self {
            OperatorExpr::Id | OperatorExpr::Permute(_) => 0,
            OperatorExpr::Left(f) | OperatorExpr::Right(f) => of(f.order()),
            OperatorExpr::Diff(d) => of(d.order()),
            OperatorExpr::Scale(s) => of(s.order()),
            OperatorExpr::Sum(v) => v.iter().map(Self::min_shift).min().unwrap_or(0),
            OperatorExpr::Compose(v) => v.iter().map(Self::min_shift).sum(),
            OperatorExpr::Adjoint(a) => a.min_shift(),
        }
    }

    /// Laurent depth: extra window needed so that negative powers of λ do
    /// not pull unknown coefficients into the result.
    pub fn depth(&self) -> i32 {
        -self.min_shift()
    }

    pub fn with_trunc(&self, trunc: i32) -> Self {
        match self {
            OperatorExpr::Id => OperatorExpr::Id,
            OperatorExpr::Left(f) => OperatorExpr::Left(f.with_trunc(trunc)),
            OperatorExpr::Right(f) => OperatorExpr::Right(f.with_trunc(trunc)),
            OperatorExpr::Diff(d) => OperatorExpr::Diff(d.with_trunc(trunc)),
            OperatorExpr::Scale(s) => OperatorExpr::Scale(s.with_trunc(trunc)),
            OperatorExpr::Sum(v) => OperatorExpr::Sum(v.iter().map(|a| a.with_trunc(trunc)).collect()),
            OperatorExpr::Compose(v) => OperatorExpr::Compose(v.iter().map(|a| a.with_trunc(trunc)).collect()),
            OperatorExpr::Adjoint(a) => OperatorExpr::Adjoint(Box::new(a.with_trunc(trunc))),
            OperatorExpr::Permute(p) => OperatorExpr::Permute(p.clone()),
        }
    }

    /// Short human-readable form.
    pub fn describe(&self) -> String {
        match self {
            OperatorExpr::Id => "Id".into(),
            OperatorExpr::Left(_) => "L(f)".into(),
            OperatorExpr::Right(_) => "R(f)".into(),
            OperatorExpr::Diff(d) => format!("D(order {})", d.max_derivative()),
            OperatorExpr::Scale(_) => "s".into(),
            OperatorExpr::Sum(v) => format!("({})", v.iter().map(Self::describe).collect::<Vec<_>>().join(" + ")),
            OperatorExpr::Compose(v) => v.iter().map(Self::describe).collect::<Vec<_>>().join("∘"),
            OperatorExpr::Adjoint(a) => format!("({})*", a.describe()),
            OperatorExpr::Permute(p) => format!("P{:?}", p.iter().map(|k| k + 1).collect::<Vec<_>>()),
        }
    }
}

/// Evaluate `A u` in the model of `gns`, widening the window by the Laurent
/// depth of `A` and truncating back.
pub fn apply<C: Scalar>(op: &OperatorExpr<C>, gns: &Gns<C>, u: &Observable<C>) -> Result<Observable<C>> {
    let k = op.depth();
    if k == 0 {
        return apply_raw(op, gns, u);
    }
    let n = gns.trunc();
    let wide = gns.with_trunc(n + k)?;
    let out = apply_raw(&op.with_trunc(n + k), &wide, &u.with_trunc(n + k))?;
    Ok(out.with_trunc(n))
}

fn apply_raw<C: Scalar>(op: &OperatorExpr<C>, gns: &Gns<C>, u: &Observable<C>) -> Result<Observable<C>> {
    match op {
        OperatorExpr::Id => Ok(u.clone()),
        OperatorExpr::Left(f) => gns.left(f, u),
        OperatorExpr::Right(f) => gns.right(f, u),
        OperatorExpr::Diff(d) => Ok(d.with_trunc(u.trunc()).apply(u)?.restrict(gns.support_components())),
        OperatorExpr::Scale(s) => Ok(u.scale_series(&s.with_trunc(u.trunc()))),
        OperatorExpr::Sum(v) => {
            let mut acc = gns.zero_vector().with_trunc(u.trunc());
            for a in v {
                acc = acc.checked_add(&apply_raw(a, gns, u)?)?;
            }
            Ok(acc)
        }
        OperatorExpr::Compose(v) => {
            let mut acc = u.clone();
            for a in v.iter().rev() {
                acc = apply_raw(a, gns, &acc)?;
            }
            Ok(acc)
        }
        OperatorExpr::Adjoint(a) => apply_raw(&adjoint(a, gns)?, gns, u),
        OperatorExpr::Permute(perm) => {
            let m = u.chart().components;
            if perm.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: perm.len() });
            }
            let mut parts = vec![crate::series::LambdaSeries::zero(u.trunc()); m];
            for (k, &dst) in perm.iter().enumerate() {
                parts[dst] = u.part(k).clone();
            }
            Ok(Observable::from_parts(u.chart(), u.trunc(), parts)?.restrict(gns.support_components()))
        }
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &d) in perm.iter().enumerate() {
        inv[d] = k;
    }
    inv
}

/// Adjoint with respect to the GNS inner product.
pub fn adjoint<C: Scalar>(op: &OperatorExpr<C>, gns: &Gns<C>) -> Result<OperatorExpr<C>> {
    Ok(match op {
        OperatorExpr::Id => OperatorExpr::Id,
        OperatorExpr::Left(f) => OperatorExpr::Left(f.conj()),
        OperatorExpr::Right(f) => {
            if gns.kind() != ModelKind::Faithful {
                return Err(Error::ModelMismatch(format!("right multiplication on the {} model", gns.kind().name())));
            }
            match gns.kms_factors() {
                Some((e, e_inv)) => {
                    let alg = gns.algebra();
                    let f = f.with_trunc(alg.trunc());
                    OperatorExpr::Right(alg.mul(&alg.mul(e, &f.conj())?, e_inv)?)
                }
                None => OperatorExpr::Right(f.conj()),
            }
        }
        OperatorExpr::Diff(_) => return Err(Error::NoKnownAdjoint("differential operator".into())),
        OperatorExpr::Scale(s) => OperatorExpr::Scale(s.conj()),
        OperatorExpr::Sum(v) => OperatorExpr::Sum(v.iter().map(|a| adjoint(a, gns)).collect::<Result<_>>()?),
        OperatorExpr::Compose(v) => {
            OperatorExpr::Compose(v.iter().rev().map(|a| adjoint(a, gns)).collect::<Result<_>>()?)
        }
        OperatorExpr::Adjoint(a) => (**a).clone(),
        OperatorExpr::Permute(p) => {
            let full = gns.support_components().len() == gns.vector_chart().components;
            if gns.kind() != ModelKind::Faithful || gns.kms_factors().is_some() || !full || !gns.uniform_weights() {
                return Err(Error::NoKnownAdjoint("component permutation outside the trace model".into()));
            }
            OperatorExpr::Permute(invert(p))
        }
    })
}

/// `supp(A ψ) ≤ supp(ψ)` for every basis vector of degree at most `d`.
pub fn is_local<C: Scalar>(op: &OperatorExpr<C>, gns: &Gns<C>, d: u32) -> Result<bool> {
    let m = gns.vector_chart().components;
    for e in gns.vector_basis(d) {
        let v = apply(op, gns, &e)?;
        if !gns.support_of_vector(&v).leq(&gns.support_of_vector(&e), m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A local operator has a local adjoint.
pub fn adjoint_locality_check<C: Scalar>(op: &OperatorExpr<C>, gns: &Gns<C>, d: u32) -> Result<bool> {
    if !is_local(op, gns, d)? {
        return Ok(true);
    }
    is_local(&adjoint(op, gns)?, gns, d)
}

/// The unitary `R_{Exp(-β/2 H) ⋆ Exp(β'/2 H')}` from the KMS space of
/// `(H, β)` to that of `(H', β')`.
pub fn kms_equivalence<C: Scalar>(
    from: &crate::gns::PositiveFunctional<C>,
    to: &crate::gns::PositiveFunctional<C>,
) -> Result<OperatorExpr<C>> {
    use crate::gns::FunctionalKind;
    use crate::star::star_exp_rational;
    let (FunctionalKind::Kms { h, beta, .. }, FunctionalKind::Kms { h: h2, beta: b2, .. }) = (from.kind(), to.kind()) else {
        return Err(Error::Invalid("KMS equivalence needs two KMS functionals".into()));
    };
    if from.algebra() != to.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = from.algebra();
    let half = crate::scalar::rat(1, 2);
    let a = star_exp_rational(alg, h, &(-beta.clone() * half.clone()))?;
    let b = star_exp_rational(alg, h2, &(b2.clone() * half))?;
    Ok(OperatorExpr::Right(alg.mul(&a, &b)?))
}
