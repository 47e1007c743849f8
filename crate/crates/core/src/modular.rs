//! Formal Tomita-Takesaki theory for KMS functionals.
//!
//! With `E(s) = Exp(sβH)`:
//!
//! ```text
//! S f = conj f              F f = E(-1) ⋆ conj f ⋆ E(1)
//! Δ^z f = E(-z) ⋆ f ⋆ E(z)  J f = E(-1/2) ⋆ conj f ⋆ E(1/2)
//! U_t f = Σ_k (-it/λ)^k ad(H)^k f / k!
//! ```

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::coeffs::Observable;
use crate::error::{Error, Result};
use crate::gns::{FunctionalKind, Gns, PositiveFunctional};
use crate::oper::{apply, OperatorExpr};
use crate::scalar::{rat, Rational, Scalar};
use crate::star::{star_exp_rational, StarAlgebra};

/// Hamiltonian, inverse temperature and a cache of `E(s)`.
#[derive(Debug)]
pub struct ModularData<C> {
    alg: StarAlgebra,
    h: Observable<C>,
    beta: Rational,
    cache: Mutex<BTreeMap<Rational, Observable<C>>>,
}

/// Which candidate formula reproduces `J L_f J` as a right multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationReport<C> {
    /// The witnessed `g` with `J L_f J = R_g` on the probe basis.
    pub witness: Observable<C>,
    /// `E(-1/2) ⋆ conj f ⋆ E(1/2)` equals the witness.
    pub plus_matches: bool,
    /// `E(-1/2) ⋆ conj f ⋆ E(-1/2)` equals the witness.
    pub minus_matches: bool,
    /// `R_g` commutes with the left multiplications by the probes.
    pub commutes: bool,
}

impl<C: Scalar> ModularData<C> {
    pub fn new(alg: &StarAlgebra, h: &Observable<C>, beta: Rational) -> Result<Self> {
        if !h.is_real() {
            return Err(Error::Invalid("modular data needs a real Hamiltonian".into()));
        }
        if let Some(o) = h.order().finite() {
            if o < 1 {
                return Err(Error::OrderTooLow(format!("o(H) = {o}, modular theory needs >= 1")));
            }
        }
        Ok(ModularData { alg: alg.clone(), h: h.clone(), beta, cache: Mutex::new(BTreeMap::new()) })
    }

    /// Modular data of a KMS functional.
    pub fn of_kms(omega: &PositiveFunctional<C>) -> Result<Self> {
        match omega.kind() {
            FunctionalKind::Kms { h, beta, .. } => Self::new(omega.algebra(), h, beta.clone()),
            _ => Err(Error::Invalid("modular data needs a KMS functional".into())),
        }
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.alg
    }

    pub fn hamiltonian(&self) -> &Observable<C> {
        &self.h
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `E(s) = Exp(sβH)`.
    pub fn e(&self, s: &Rational) -> Result<Observable<C>> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(s) {
            return Ok(v.clone());
        }
        let v = star_exp_rational(&self.alg, &self.h, &(s * &self.beta))?;
        self.cache.lock().expect("cache lock").insert(s.clone(), v.clone());
        Ok(v)
    }

    fn sandwich(&self, a: &Rational, f: &Observable<C>, b: &Rational) -> Result<Observable<C>> {
        self.alg.mul(&self.alg.mul(&self.e(a)?, f)?, &self.e(b)?)
    }

    pub fn s(&self, f: &Observable<C>) -> Observable<C> {
        f.conj()
    }

    pub fn f(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.sandwich(&rat(-1, 1), &f.conj(), &rat(1, 1))
    }

    /// `Δ^z f = E(-z) ⋆ f ⋆ E(z)`.
    pub fn delta_pow(&self, z: &Rational, f: &Observable<C>) -> Result<Observable<C>> {
        self.sandwich(&-z.clone(), f, z)
    }

    pub fn j(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.sandwich(&rat(-1, 2), &f.conj(), &rat(1, 2))
    }

    /// `J L_f J` matched against a right multiplication on `probes`.
    ///
    /// The witness is `g = J(f ⋆ J(1))`, the image of the unit; the match is
    /// then checked on every probe, and both sign candidates are compared.
    pub fn modular_conjugate_left(
        &self,
        f: &Observable<C>,
        probes: &[Observable<C>],
    ) -> Result<(OperatorExpr<C>, ConjugationReport<C>)> {
        let jlj = |u: &Observable<C>| -> Result<Observable<C>> { self.j(&self.alg.mul(f, &self.j(u)?)?) };
        let witness = jlj(&self.alg.one())?;
        for u in probes {
            if jlj(u)? != self.alg.mul(u, &witness)? {
                return Err(Error::NotARightMultiplication);
            }
        }
        let half = rat(1, 2);
        let plus = self.sandwich(&-half.clone(), &f.conj(), &half)?;
        let minus = self.sandwich(&-half.clone(), &f.conj(), &-half)?;
        let mut commutes = true;
        for h in probes {
            for u in probes {
                let lr = self.alg.mul(h, &self.alg.mul(u, &witness)?)?;
                let rl = self.alg.mul(&self.alg.mul(h, u)?, &witness)?;
                commutes &= lr == rl;
            }
        }
        let report = ConjugationReport {
            plus_matches: plus == witness,
            minus_matches: minus == witness,
            commutes,
            witness: witness.clone(),
        };
        Ok((OperatorExpr::Right(witness), report))
    }

    /// `(1/λ) ad(H) f`, exact on the window because `o(H) >= 1`.
    fn ad_h_over_lambda(&self, f: &Observable<C>) -> Result<Observable<C>> {
        let n = self.alg.trunc();
        let wide = self.alg.with_trunc(n + 1);
        let (h, f1) = (self.h.with_trunc(n + 1), f.with_trunc(n + 1));
        Ok(wide.comm(&h, &f1)?.shift(-1).with_trunc(n))
    }

    /// `Σ_k c_k (ad(H)/λ)^k f / k!`, summed until the terms vanish.
    fn ad_exponential(&self, c: &C, f: &Observable<C>) -> Result<Observable<C>> {
        let mut term = f.clone();
        let mut acc = f.clone();
        let mut k = 0i64;
        loop {
            k += 1;
            term = self.ad_h_over_lambda(&term)?.scale(&(c.clone() / C::from_i64(k)));
            if term.is_zero() {
                break;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// `U_t f = Σ_k (-it/λ)^k ad(H)^k f / k!`.
    pub fn modular_group(&self, t: &Rational, f: &Observable<C>) -> Result<Observable<C>> {
        let c = C::imag_unit().mul_ref(&C::from_rational(&-t.clone()));
        self.ad_exponential(&c, f)
    }

    /// `exp(-β ad(H)) f`, the formal logarithm side of `Δ`.
    pub fn delta_via_log(&self, f: &Observable<C>) -> Result<Observable<C>> {
        let n = self.alg.trunc();
        let wide = self.alg.with_trunc(n + 1);
        let mut term = f.clone();
        let mut acc = f.clone();
        let mut k = 0i64;
        let c = C::from_rational(&-self.beta.clone());
        loop {
            k += 1;
            let t1 = term.with_trunc(n + 1);
            term = wide.comm(&self.h.with_trunc(n + 1), &t1)?.with_trunc(n).scale(&(c.clone() / C::from_i64(k)));
            if term.is_zero() {
                break;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }
}

/// `Δ^z ∘ L_f ∘ Δ^{-z}` applied to `u`, next to `L_{Δ^z f}` applied to `u`.
pub fn conjugated_left<C: Scalar>(
    data: &ModularData<C>,
    gns: &Gns<C>,
    z: &Rational,
    f: &Observable<C>,
    u: &Observable<C>,
) -> Result<(Observable<C>, Observable<C>)> {
    let lhs = data.delta_pow(z, &apply(&OperatorExpr::Left(f.clone()), gns, &data.delta_pow(&-z.clone(), u)?)?)?;
    let rhs = apply(&OperatorExpr::Left(data.delta_pow(z, f)?), gns, u)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Chart, Mono};
    use crate::scalar::{int, Cq};
    use crate::star::Product;

    type O = Observable<Cq>;

    fn data(n: i32, beta: i64) -> ModularData<Cq> {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, n).unwrap();
        let q: O = alg.var("q1").unwrap();
        let p: O = alg.var("p1").unwrap();
        let h = (&(&q * &q) + &(&p * &q)).shift(1);
        let h = &h + &(&p * &p).shift(1);
        ModularData::new(&alg, &h, int(beta)).unwrap()
    }

    fn basis(alg: &StarAlgebra, d: u32) -> Vec<O> {
        crate::coeffs::monomials_up_to(2, d).into_iter().map(|m| O::monomial(alg.chart(), alg.trunc(), m)).collect()
    }

    #[test]
    fn involutions_and_group_law() {
        let md = data(4, 2);
        let alg = md.algebra().clone();
        for f in basis(&alg, 3) {
            let fi = f.scale(&crate::scalar::cq(int(1), int(2)));
            assert_eq!(md.s(&md.s(&fi)), fi);
            assert_eq!(md.f(&md.f(&fi).unwrap()).unwrap(), fi);
            assert_eq!(md.j(&md.j(&fi).unwrap()).unwrap(), fi);
            let half = rat(1, 2);
            let d1 = md.delta_pow(&half, &md.delta_pow(&half, &fi).unwrap()).unwrap();
            assert_eq!(d1, md.f(&md.s(&fi)).unwrap());
            assert_eq!(md.j(&fi).unwrap(), md.s(&md.delta_pow(&-half, &fi).unwrap()));
            assert_eq!(md.delta_via_log(&fi).unwrap(), md.delta_pow(&int(1), &fi).unwrap());
        }
    }

    #[test]
    fn conjugation_sign() {
        let md = data(4, 3);
        let alg = md.algebra().clone();
        let probes = basis(&alg, 2);
        let f = O::monomial(alg.chart(), 4, Mono::from_exps(&[1, 0]));
        let (_, rep) = md.modular_conjugate_left(&f, &probes).unwrap();
        assert!(rep.plus_matches && rep.commutes);
        assert!(!rep.minus_matches);
    }

    #[test]
    fn modular_group_law() {
        let md = data(4, 1);
        let alg = md.algebra().clone();
        for f in basis(&alg, 2) {
            assert_eq!(md.modular_group(&int(0), &f).unwrap(), f);
            let t = rat(2, 3);
            let back = md.modular_group(&-t.clone(), &md.modular_group(&t, &f).unwrap()).unwrap();
            assert_eq!(back, f);
        }
    }
}
