//! Operator calculus on GNS spaces: expressions, adjoints, locality and
//! commutant probes.

mod commutant;
mod diffop;
mod expr;
mod linalg;

pub use commutant::{commutant_probe, matrixize, vector_basis_keys, BasisKey, CommutantReport, TruncatedMatrix};
pub use diffop::DiffOp;
pub use expr::{adjoint, adjoint_locality_check, apply, is_local, kms_equivalence, OperatorExpr};
pub use linalg::{Echelon, SparseRow};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Chart, Density, Observable};
    use crate::gns::{Gns, PositiveFunctional};
    use crate::scalar::{int, Cq};
    use crate::star::{Product, StarAlgebra};

    type O = Observable<Cq>;

    #[test]
    fn fock_commutant_is_trivial() {
        let alg = StarAlgebra::new(Chart::wick(1), Product::Wick, 4).unwrap();
        let g = Gns::new(&PositiveFunctional::delta0(&alg).unwrap()).unwrap();
        let gens = vec![OperatorExpr::Left(alg.var("z1").unwrap()), OperatorExpr::Left(alg.var("zbar1").unwrap())];
        let r = commutant_probe(&gens, &g, 3, 0).unwrap();
        assert_eq!(r.dimension, 1, "{r:?}");
    }

    #[test]
    fn schrodinger_commutant_counts_components() {
        for m in [1usize, 2] {
            let chart = Chart::cotangent(1, Density::Gaussian(int(1))).with_components(m);
            let alg = StarAlgebra::new(chart.clone(), Product::Weyl, 4).unwrap();
            let g = Gns::new(&PositiveFunctional::<Cq>::schrodinger(&alg).unwrap()).unwrap();
            let gens = vec![
                OperatorExpr::Left(alg.var("q1").unwrap()),
                OperatorExpr::Left(alg.var("p1").unwrap()),
                OperatorExpr::Left(O::indicator(&chart, 4, &[0].into())),
            ];
            let r = commutant_probe(&gens, &g, 3, 0).unwrap();
            assert_eq!(r.dimension, m, "{r:?}");
        }
    }

    #[test]
    fn trace_commutant_is_right_multiplications() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 3).unwrap();
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&alg).unwrap()).unwrap();
        let gens: Vec<_> = g.vector_basis(2).into_iter().map(OperatorExpr::Left).collect();
        let r = commutant_probe(&gens, &g, 2, 1).unwrap();
        assert_eq!(r.dimension, 3, "{r:?}");
    }

    #[test]
    fn adjoints_and_locality() {
        let chart = Chart::moyal(1).with_components(2);
        let alg = StarAlgebra::new(chart.clone(), Product::Moyal, 4).unwrap();
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&alg).unwrap()).unwrap();
        let swap = OperatorExpr::swap(2, 0, 1);
        assert!(!is_local(&swap, &g, 2).unwrap());
        assert!(is_local(&OperatorExpr::Left(alg.var("q1").unwrap()), &g, 2).unwrap());
        let f: O = alg.var("q1").unwrap();
        let r = OperatorExpr::Right(&f + &alg.var::<Cq>("p1").unwrap().scale(&crate::scalar::cq(int(0), int(1))));
        let ra = adjoint(&r, &g).unwrap();
        assert_eq!(ra, OperatorExpr::Right(&f - &alg.var::<Cq>("p1").unwrap().scale(&crate::scalar::cq(int(0), int(1)))));
        assert!(matches!(adjoint(&OperatorExpr::Diff(DiffOp::zero(2, 4)), &g), Err(crate::Error::NoKnownAdjoint(_))));
    }

    #[test]
    fn laurent_depth_realizes_derivative() {
        let alg = StarAlgebra::new(Chart::moyal(1), Product::Moyal, 4).unwrap();
        let g = Gns::new(&PositiveFunctional::<Cq>::trace(&alg).unwrap()).unwrap();
        let p: O = alg.var("p1").unwrap();
        let i_over_lam = crate::series::LambdaSeries::monomial(-1, crate::scalar::cq(int(0), int(1)), 4);
        let dq = OperatorExpr::Scale(i_over_lam).then_after(OperatorExpr::ad(&p));
        assert_eq!(dq.depth(), 1);
        let u = O::monomial(alg.chart(), 4, crate::coeffs::Mono::from_exps(&[3, 2])).shift(2);
        assert_eq!(apply(&dq, &g, &u).unwrap(), u.derive(0));
    }
}
