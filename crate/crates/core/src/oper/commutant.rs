//! Truncated matrices of operators and commutant probes.
//!
//! An operator is tabulated on the monomial vectors of degree `<= d`. The
//! probe searches `X = Σ_k λ^k X_k` with `X_k` raising degree by at most `s`
//! and solves `[X, M(g)] = 0` order by order in λ. Columns whose images
//! would leave the truncated space are excluded from the equations. The
//! reported dimension counts the order-zero solutions restricted to the
//! trusted columns that lift through every order of the window.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::expr::{apply, OperatorExpr};
use super::linalg::{Echelon, SparseRow};
use crate::coeffs::{Mono, Observable};
use crate::error::{Error, Result};
use crate::gns::Gns;
use crate::scalar::Cq;
use crate::series::LambdaSeries;

/// A basis vector: component and monomial.
pub type BasisKey = (usize, Mono);

/// Matrix of an operator on the degree-`d` basis, with λ-series entries.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMatrix {
    pub basis: Vec<BasisKey>,
    /// `(row, column) -> entry`.
    pub entries: BTreeMap<(usize, usize), LambdaSeries<Cq>>,
    /// Largest degree raise seen, including images beyond degree `d`.
    pub raise: i32,
    /// Columns whose image has components of degree above `d`.
    pub overflow: BTreeSet<usize>,
}

impl TruncatedMatrix {
    /// Lowest λ-exponent among the entries.
    pub fn min_exponent(&self) -> Option<i32> {
        self.entries.values().filter_map(|s| s.order().finite()).min()
    }

    /// The λ^k coefficient matrix.
    pub fn coefficient(&self, k: i32) -> BTreeMap<(usize, usize), Cq> {
        self.entries
            .iter()
            .filter_map(|(ij, s)| s.coeff(k).map(|c| (*ij, c.clone())))
            .collect()
    }
}

fn degree_of(key: &BasisKey) -> i32 {
    key.1.degree() as i32
}

pub fn vector_basis_keys(gns: &Gns<Cq>, d: u32) -> Vec<BasisKey> {
    let nv = gns.vector_chart().nvars();
    let mut out = Vec::new();
    for &c in gns.support_components() {
        for m in crate::coeffs::monomials_up_to(nv, d) {
            out.push((c, m));
        }
    }
    out
}

/// Tabulate `op` on the monomial vectors of degree at most `d`.
pub fn matrixize(op: &OperatorExpr<Cq>, gns: &Gns<Cq>, d: u32) -> Result<TruncatedMatrix> {
    let basis = vector_basis_keys(gns, d);
    let index: BTreeMap<BasisKey, usize> = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let chart = gns.vector_chart();
    let trunc = gns.trunc();
    let mut entries: BTreeMap<(usize, usize), LambdaSeries<Cq>> = BTreeMap::new();
    let mut raise = i32::MIN;
    let mut overflow = BTreeSet::new();
    for (j, (c, m)) in basis.iter().enumerate() {
        let e = Observable::monomial(chart, trunc, m.clone()).restrict(&[*c].into());
        let v = apply(op, gns, &e)?;
        for (k, part) in v.parts().iter().enumerate() {
            for (lam, g) in part.terms() {
                if !g.is_polynomial() {
                    return Err(Error::Invalid("operator image leaves the polynomial vectors".into()));
                }
                for (mono, coeff) in g.polynomial_part().terms() {
                    raise = raise.max(mono.degree() as i32 - m.degree() as i32);
                    match index.get(&(k, mono.clone())) {
                        Some(&i) => {
                            let entry = entries.entry((i, j)).or_insert_with(|| LambdaSeries::zero(trunc));
                            entry.add_term(lam, coeff.clone());
                        }
                        None => {
                            overflow.insert(j);
                        }
                    }
                }
            }
        }
    }
    entries.retain(|_, s| !s.is_zero());
    Ok(TruncatedMatrix { basis, entries, raise: if raise == i32::MIN { 0 } else { raise }, overflow })
}

/// Result of a commutant probe.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutantReport {
    /// Dimension of the order-zero commutant on the trusted columns after
    /// lifting through the whole window.
    pub dimension: usize,
    /// Dimension after lifting through orders `0..=k`.
    pub per_order: Vec<usize>,
    /// `per_order[k] == per_order[0]`: every order-zero solution lifts to `k`.
    pub lifts: Vec<bool>,
    /// Basis columns excluded from the trusted set.
    pub flagged_boundary_columns: Vec<BasisKey>,
    /// Representative order-zero solutions.
    pub basis: Vec<TruncatedMatrix>,
}

/// Probe the commutant of `generators` at degree `d`, allowing `X` to raise
/// degree by at most `s`.
pub fn commutant_probe(generators: &[OperatorExpr<Cq>], gns: &Gns<Cq>, d: u32, s: u32) -> Result<CommutantReport> {
    let trunc = gns.trunc();
    let mats = generators.iter().map(|g| matrixize(g, gns, d)).collect::<Result<Vec<_>>>()?;
    let basis = vector_basis_keys(gns, d);
    let nb = basis.len();
    let d = d as i32;
    let s = s as i32;

    let r_star = mats.iter().map(|m| m.raise).filter(|&r| r > 0).min().unwrap_or(0);
    let trusted: BTreeSet<usize> = (0..nb).filter(|&j| degree_of(&basis[j]) + s + r_star <= d).collect();
    if trusted.is_empty() {
        return Err(Error::DegenerateTruncation);
    }
    let flagged_boundary_columns = (0..nb).filter(|j| !trusted.contains(j)).map(|j| basis[j].clone()).collect();

    // Unknown layout: X_k[i][j] for allowed (i, j), k = 0..=L.
    let allowed: Vec<(usize, usize)> = (0..nb)
        .flat_map(|j| (0..nb).map(move |i| (i, j)))
        .filter(|&(i, j)| degree_of(&basis[i]) <= degree_of(&basis[j]) + s)
        .collect();
    let slot: BTreeMap<(usize, usize), usize> = allowed.iter().enumerate().map(|(n, ij)| (*ij, n)).collect();
    let na = allowed.len();
    let var = |k: i32, ij: (usize, usize)| slot.get(&ij).map(|n| k as usize * na + n);

    let gen_min: Vec<i32> = mats.iter().map(|m| m.min_exponent().unwrap_or(0)).collect();
    let r_min = gen_min.iter().copied().min().unwrap_or(0).min(0);
    let l_max = (trunc - r_min).clamp(0, trunc.max(0));

    // Sparse column views of each generator's coefficient matrices.
    type Coeffs = BTreeMap<i32, (BTreeMap<usize, Vec<(usize, Cq)>>, BTreeMap<usize, Vec<(usize, Cq)>>)>;
    let views: Vec<Coeffs> = mats
        .iter()
        .map(|m| {
            let mut out: Coeffs = BTreeMap::new();
            for ((i, j), series) in &m.entries {
                for (k, c) in series.terms() {
                    let (by_col, by_row) = out.entry(k).or_default();
                    by_col.entry(*j).or_default().push((*i, c.clone()));
                    by_row.entry(*i).or_default().push((*j, c.clone()));
                }
            }
            out
        })
        .collect();

    let p_cols: Vec<usize> = allowed
        .iter()
        .enumerate()
        .filter(|(_, (_, j))| trusted.contains(j))
        .map(|(n, _)| n)
        .collect();

    let mut ech = Echelon::new();
    let mut per_order = Vec::new();
    let mut final_rows: Vec<SparseRow> = Vec::new();
    for l in 0..=l_max {
        for (g, m) in mats.iter().enumerate() {
            let rg = m.raise.max(0);
            let cols: Vec<usize> = (0..nb).filter(|&j| degree_of(&basis[j]) + s + rg <= d).collect();
            // Equations at λ^t whose unknowns include X_l and none above it.
            let t = l + gen_min[g];
            if t > trunc {
                continue;
            }
            for &j in &cols {
                for i in 0..nb {
                    let mut row = SparseRow::new();
                    for (&r, (by_col, by_row)) in &views[g] {
                        let k = t - r;
                        if k < 0 || k > l {
                            continue;
                        }
                        // (X_k M_r)[i][j] = Σ_x X_k[i][x] M_r[x][j]
                        if let Some(col) = by_col.get(&j) {
                            for (x, c) in col {
                                if let Some(v) = var(k, (i, *x)) {
                                    *row.entry(v).or_insert_with(Cq::zero) += c;
                                }
                            }
                        }
                        // (M_r X_k)[i][j] = Σ_x M_r[i][x] X_k[x][j]
                        if let Some(rw) = by_row.get(&i) {
                            for (x, c) in rw {
                                if let Some(v) = var(k, (*x, j)) {
                                    *row.entry(v).or_insert_with(Cq::zero) -= c;
                                }
                            }
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        final_rows.push(row.clone());
                        ech.insert(row);
                    }
                }
            }
        }
        let rank_a = ech.rank();
        let mut aug = ech.clone();
        for &p in &p_cols {
            aug.insert([(p, Cq::one())].into());
        }
        per_order.push(aug.rank() - rank_a);
    }
    let dimension = *per_order.last().expect("at least order zero");
    let lifts = per_order.iter().map(|&x| x == per_order[0]).collect();

    // Representatives: null-space vectors projected to X_0 on trusted columns.
    let nunk = na * (l_max as usize + 1);
    let mut proj = Echelon::new();
    let mut reps = Vec::new();
    for v in ech.null_space(nunk) {
        let p: SparseRow = v.iter().filter(|(c, _)| p_cols.binary_search(c).is_ok()).map(|(c, x)| (*c, x.clone())).collect();
        if p.is_empty() || !proj.insert(p) {
            continue;
        }
        let mut entries = BTreeMap::new();
        for (c, x) in v.iter().filter(|(c, _)| **c < na) {
            entries.insert(allowed[*c], LambdaSeries::constant(x.clone(), trunc));
        }
        reps.push(TruncatedMatrix { basis: basis.clone(), entries, raise: s, overflow: BTreeSet::new() });
        if reps.len() == dimension {
            break;
        }
    }
    Ok(CommutantReport { dimension, per_order, lifts, flagged_boundary_columns, basis: reps })
}
