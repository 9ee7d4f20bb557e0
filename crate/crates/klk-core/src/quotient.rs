//! Graded quotients R\[s,t\]/(h1, h2) with deg s = 2, deg t = 1 and two
//! homogeneous generators, reduced per degree by exact linear algebra.
//!
//! Each consumer supplies, per degree, the expected quotient dimension and a
//! candidate set of surviving basis monomials. The candidate is verified by
//! rank; if some pivot lands inside it the construction falls back to plain
//! echelon pivots and records the basis actually used. A dimension mismatch
//! against the expected count is an internal-consistency error.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gray::GradedPoly;
use crate::linalg;
use crate::scalar::Rational;

/// Which monomials the candidate basis prefers to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisPreference {
    /// Keep s^a t^(k-2a) for a = 0 .. dim-1 (lowest s-powers survive).
    LowS,
    /// Keep s^a t^(k-2a) for a = max(0, k-n) .. floor(k/2).
    HighS,
}

#[derive(Debug, Clone)]
pub struct DegreeTable {
    /// All monomials (a, b) with 2a + b = k, a ascending.
    pub monomials: Vec<(u64, u64)>,
    /// Surviving basis monomials, a ascending.
    pub basis: Vec<(u64, u64)>,
    /// Whether the candidate basis had to be replaced by echelon pivots.
    pub fallback: bool,
    /// Row per monomial: its coordinates on `basis`.
    reduce: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct GradedQuotient {
    pub n: usize,
    tables: Vec<DegreeTable>,
}

fn monomials_of_degree(k: usize) -> Vec<(u64, u64)> {
    (0..=(k / 2))
        .map(|a| (a as u64, (k - 2 * a) as u64))
        .collect()
}

impl GradedQuotient {
    /// Build the quotient by (h1, h2) on C^n-grading: degrees run 0..=2n and
    /// everything above vanishes. `expected_dim(k)` is the required dimension
    /// of the degree-k piece.
    pub fn new(
        n: usize,
        h1: &GradedPoly,
        h2: &GradedPoly,
        pref: BasisPreference,
        expected_dim: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let max_degree = 2 * n;
        let gens = [h1, h2];
        let mut tables = Vec::with_capacity(max_degree + 1);
        for k in 0..=max_degree {
            let monomials = monomials_of_degree(k);
            let expected = expected_dim(k);

            // relation rows: m * h_j for monomials m of the right degree
            let mut relations: Vec<GradedPoly> = Vec::new();
            for h in gens {
                let d = h.degree().unwrap_or(0);
                if k >= d {
                    for (a, b) in monomials_of_degree(k - d) {
                        relations.push(h.mul(&GradedPoly::monomial(a, b, Rational::one())));
                    }
                }
            }

            let candidate: Vec<(u64, u64)> = match pref {
                BasisPreference::LowS => monomials.iter().copied().take(expected).collect(),
                BasisPreference::HighS => {
                    let lo = k.saturating_sub(n) as u64;
                    monomials
                        .iter()
                        .copied()
                        .filter(|(a, _)| *a >= lo)
                        .collect()
                }
            };

            let table = Self::build_degree(k, &monomials, &relations, &candidate, expected)?;
            tables.push(table);
        }
        Ok(GradedQuotient { n, tables })
    }

    fn build_degree(
        k: usize,
        monomials: &[(u64, u64)],
        relations: &[GradedPoly],
        candidate: &[(u64, u64)],
        expected: usize,
    ) -> Result<DegreeTable> {
        let total = monomials.len();
        let rel_rank = {
            let rows: Vec<Vec<Rational>> = relations
                .iter()
                .map(|r| monomials.iter().map(|&(a, b)| r.coefficient(a, b)).collect())
                .collect();
            linalg::rank(&rows)
        };
        if total - rel_rank != expected {
            return Err(Error::InternalConsistency(format!(
                "degree {k}: quotient dimension {} does not match the expected {expected}",
                total - rel_rank
            )));
        }

        // column order: non-candidate monomials first so pivots prefer them
        let mut order: Vec<usize> = Vec::with_capacity(total);
        let in_candidate: Vec<bool> = monomials.iter().map(|m| candidate.contains(m)).collect();
        for (i, inc) in in_candidate.iter().enumerate() {
            if !inc {
                order.push(i);
            }
        }
        let first_candidate_col = order.len();
        for (i, inc) in in_candidate.iter().enumerate() {
            if *inc {
                order.push(i);
            }
        }

        let mut rows: Vec<Vec<Rational>> = relations
            .iter()
            .map(|r| {
                order
                    .iter()
                    .map(|&i| {
                        let (a, b) = monomials[i];
                        r.coefficient(a, b)
                    })
                    .collect()
            })
            .collect();
        let pivots = linalg::rref(&mut rows);

        let candidate_ok = candidate.len() == expected
            && pivots.iter().all(|&c| c < first_candidate_col);

        let (order, rows, pivots) = if candidate_ok {
            (order, rows, pivots)
        } else {
            // fallback: plain ascending column order, echelon pivots decide
            let order: Vec<usize> = (0..total).collect();
            let mut rows: Vec<Vec<Rational>> = relations
                .iter()
                .map(|r| monomials.iter().map(|&(a, b)| r.coefficient(a, b)).collect())
                .collect();
            let pivots = linalg::rref(&mut rows);
            (order, rows, pivots)
        };

        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis_cols: Vec<usize> = (0..total).filter(|c| !pivot_set.contains(c)).collect();
        basis_cols.sort_by_key(|&c| monomials[order[c]]);
        let basis: Vec<(u64, u64)> = basis_cols.iter().map(|&c| monomials[order[c]]).collect();

        // reduction row per monomial (in the original monomial order)
        let mut reduce = vec![vec![Rational::zero(); basis.len()]; total];
        for (col_pos, &mono_idx) in order.iter().enumerate() {
            if let Some(r) = pivots.iter().position(|&p| p == col_pos) {
                // pivot monomial = -sum over basis columns of rref row entries
                for (bi, &bc) in basis_cols.iter().enumerate() {
                    reduce[mono_idx][bi] = -rows[r][bc].clone();
                }
            } else {
                let bi = basis_cols.iter().position(|&c| c == col_pos).unwrap();
                reduce[mono_idx][bi] = Rational::one();
            }
        }

        Ok(DegreeTable {
            monomials: monomials.to_vec(),
            basis,
            fallback: !candidate_ok,
            reduce,
        })
    }

    pub fn max_degree(&self) -> usize {
        2 * self.n
    }

    pub fn table(&self, k: usize) -> Option<&DegreeTable> {
        self.tables.get(k)
    }

    pub fn basis(&self, k: usize) -> &[(u64, u64)] {
        &self.tables[k].basis
    }

    pub fn dim(&self, k: usize) -> usize {
        if k > self.max_degree() {
            0
        } else {
            self.tables[k].basis.len()
        }
    }

    /// Coordinates of the monomial s^a t^b on the degree basis; zero above
    /// the top degree.
    pub fn reduce_monomial(&self, a: u64, b: u64) -> Vec<((u64, u64), Rational)> {
        let k = (2 * a + b) as usize;
        if k > self.max_degree() {
            return Vec::new();
        }
        let t = &self.tables[k];
        let idx = t
            .monomials
            .iter()
            .position(|&m| m == (a, b))
            .expect("monomial of its own degree");
        t.reduce[idx]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(bi, c)| (t.basis[bi], c.clone()))
            .collect()
    }

    /// Normal form of a polynomial: a polynomial supported on basis monomials.
    pub fn normal_form(&self, p: &GradedPoly) -> GradedPoly {
        let mut out = BTreeMap::new();
        for ((a, b), c) in p.terms() {
            for ((ba, bb), r) in self.reduce_monomial(*a, *b) {
                let e = out.entry((ba, bb)).or_insert_with(Rational::zero);
                *e += c.clone() * r;
            }
        }
        out.retain(|_, c: &mut Rational| !c.is_zero());
        GradedPoly::from_map(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray;
    use crate::scalar::rat;

    fn dim_gray(n: usize) -> impl Fn(usize) -> usize {
        move |k| {
            if k > 2 * n {
                0
            } else {
                1 + (k.min(2 * n - k) / 2)
            }
        }
    }

    #[test]
    fn candidate_failure_falls_back_to_echelon_pivots() {
        // ideal (t^2, t^3) on the n=1 grading: at degree 2 the low-s candidate
        // {t^2} lies inside the ideal, so the echelon fallback must pick {s}
        let h1 = GradedPoly::monomial(0, 2, Rational::one());
        let h2 = GradedPoly::monomial(0, 3, Rational::one());
        let q = GradedQuotient::new(1, &h1, &h2, BasisPreference::LowS, |k| match k {
            0 | 1 | 2 => 1,
            _ => 0,
        })
        .unwrap();
        let t = q.table(2).unwrap();
        assert!(t.fallback);
        assert_eq!(t.basis, vec![(1, 0)]);
        assert!(q.normal_form(&GradedPoly::monomial(0, 2, Rational::one())).is_zero());
        assert_eq!(
            q.normal_form(&GradedPoly::monomial(1, 0, Rational::one())),
            GradedPoly::monomial(1, 0, Rational::one())
        );
    }

    #[test]
    fn gray_quotient_n1() {
        let q = GradedQuotient::new(
            1,
            &gray::g_poly(2),
            &gray::g_poly(3),
            BasisPreference::LowS,
            dim_gray(1),
        )
        .unwrap();
        // s reduces to 2 t^2
        let nf = q.normal_form(&GradedPoly::monomial(1, 0, Rational::one()));
        assert_eq!(nf, GradedPoly::monomial(0, 2, rat(2, 1)));
        // t^3 reduces to 0
        assert!(q.normal_form(&GradedPoly::monomial(0, 3, Rational::one())).is_zero());
        assert!(!q.table(2).unwrap().fallback);
    }
}
