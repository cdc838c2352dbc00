//! Prospect probabilities, utility and attraction factors, ranking.
//!
//! For a strategic state `s = sum_n c_n |e_n>` and a prospect
//! `pi = sum_n a_n |e_n>`:
//!
//! - probability `p = |<pi|s>|^2 = <s|P(pi)|s>`,
//! - utility factor `p0 = sum_n |c_n|^2 |a_n|^2` (the diagonal part),
//! - attraction factor `q = sum_{m != n} conj(c_m) c_n a_m conj(a_n)`
//!   (the off-diagonal, interference part),
//!
//! and `p = p0 + q` holds identically. Over a lattice, `p` and `p0` are each
//! divided by their lattice sums, after which `q = p - p0` sums to zero.
//!
//! All amplitude-level formulas are O(dim) per prospect; the dense operator
//! route lives in [`crate::prospects::operator_matrix`] and is only used for
//! cross-checks.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::hilbert::{dot_conj, MindSpace, StrategicState};
use crate::prospects::ProspectState;
use crate::{C64, EXACT_TOL};

/// Probabilities closer than this are indifferent.
pub const INDIFFERENCE_TOL: f64 = EXACT_TOL;

/// A lattice is degenerate when `sum_j p_j <= DEGENERACY_FLOOR * sum_j <pi_j|pi_j>`.
/// Since `p_j <= <pi_j|pi_j>` for a unit strategic state, anything below this is
/// rounding noise from a state orthogonal to every prospect.
pub const DEGENERACY_FLOOR: f64 = 1e-24;

/// Ordered, nonempty set of prospects over one mind space with unique names.
#[derive(Clone, Debug, PartialEq)]
pub struct ProspectLattice {
    prospects: Vec<ProspectState>,
}

impl ProspectLattice {
    pub fn new(prospects: Vec<ProspectState>) -> Result<Self> {
        let first = prospects
            .first()
            .ok_or_else(|| validation("a prospect lattice needs at least one prospect"))?;
        let mut names = HashSet::new();
        for p in &prospects {
            first.space().check_same(p.space())?;
            if !names.insert(p.name()) {
                return Err(validation(format!(
                    "duplicate prospect name `{}`",
                    p.name()
                )));
            }
        }
        Ok(Self { prospects })
    }

    pub fn prospects(&self) -> &[ProspectState] {
        &self.prospects
    }

    pub fn len(&self) -> usize {
        self.prospects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prospects.is_empty()
    }

    pub fn space(&self) -> &MindSpace {
        self.prospects[0].space()
    }

    pub fn get(&self, index: usize) -> Option<&ProspectState> {
        self.prospects.get(index)
    }
}

/// `|<pi|s>|^2`.
pub fn raw_probability(s: &StrategicState, pi: &ProspectState) -> Result<f64> {
    s.space().check_same(pi.space())?;
    Ok(dot_conj(pi.amplitudes(), s.amplitudes()).norm_sqr())
}

/// `sum_n |c_n|^2 |a_n|^2`.
pub fn utility_factor_raw(s: &StrategicState, pi: &ProspectState) -> Result<f64> {
    s.space().check_same(pi.space())?;
    Ok(s.amplitudes()
        .iter()
        .zip(pi.amplitudes())
        .map(|(c, a)| c.norm_sqr() * a.norm_sqr())
        .sum())
}

/// `sum_{m != n} conj(c_m) c_n a_m conj(a_n)`.
///
/// With `z_n = c_n conj(a_n)` the sum is `sum_{m != n} conj(z_m) z_n`, whose
/// terms pair up into `2 Re(conj(z_m) z_n)` for `m < n`. It is accumulated
/// directly from a running prefix sum, so it is real by construction and
/// exactly zero when only one `z_n` is nonzero.
pub fn attraction_factor_raw(s: &StrategicState, pi: &ProspectState) -> Result<f64> {
    s.space().check_same(pi.space())?;
    let mut prefix = C64::new(0.0, 0.0);
    let mut acc = 0.0;
    for (c, a) in s.amplitudes().iter().zip(pi.amplitudes()) {
        let z = c * a.conj();
        acc += (prefix.conj() * z).re;
        prefix += z;
    }
    Ok(2.0 * acc)
}

/// Interference contributions `conj(c_m) c_n a_m conj(a_n)` for every ordered
/// pair `m != n` where the term is nonzero, as `(m, n, term)` flat indices.
pub fn interference_terms(
    s: &StrategicState,
    pi: &ProspectState,
) -> Result<Vec<(usize, usize, C64)>> {
    s.space().check_same(pi.space())?;
    let z: Vec<(usize, C64)> = s
        .amplitudes()
        .iter()
        .zip(pi.amplitudes())
        .map(|(c, a)| c * a.conj())
        .enumerate()
        .filter(|(_, z)| *z != C64::new(0.0, 0.0))
        .collect();
    let mut out = Vec::new();
    for &(m, zm) in &z {
        for &(n, zn) in &z {
            if m != n {
                out.push((m, n, zm.conj() * zn));
            }
        }
    }
    Ok(out)
}

/// Per-prospect raw and normalized factors plus the induced ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub names: Vec<String>,
    pub raw_p: Vec<f64>,
    pub raw_p0: Vec<f64>,
    pub raw_q: Vec<f64>,
    pub p: Vec<f64>,
    pub p0: Vec<f64>,
    pub q: Vec<f64>,
    /// Lattice indices (0-based) by descending `p`.
    pub ranking: Vec<usize>,
    pub optimal: usize,
    /// Every index whose `p` is within [`INDIFFERENCE_TOL`] of the maximum.
    pub ties: Vec<usize>,
}

impl DecisionRecord {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn optimal_name(&self) -> &str {
        &self.names[self.optimal]
    }
}

/// Evaluates every prospect, normalizes `p` and `p0` by their lattice sums and
/// ranks by `p`. Ties go to the lowest lattice index.
pub fn decompose(s: &StrategicState, lattice: &ProspectLattice) -> Result<DecisionRecord> {
    s.space().check_same(lattice.space())?;
    let n = lattice.len();
    let mut raw_p = Vec::with_capacity(n);
    let mut raw_p0 = Vec::with_capacity(n);
    let mut raw_q = Vec::with_capacity(n);
    for pi in lattice.prospects() {
        raw_p.push(raw_probability(s, pi)?);
        raw_p0.push(utility_factor_raw(s, pi)?);
        raw_q.push(attraction_factor_raw(s, pi)?);
    }

    let scale: f64 = lattice
        .prospects()
        .iter()
        .map(ProspectState::norm_sqr)
        .sum();
    let sum_p: f64 = raw_p.iter().sum();
    let sum_p0: f64 = raw_p0.iter().sum();
    if sum_p <= DEGENERACY_FLOOR * scale || sum_p0 <= DEGENERACY_FLOOR * scale {
        return Err(Error::DegenerateLattice(format!(
            "strategic state is orthogonal to every prospect (sum p = {sum_p:e}, sum p0 = {sum_p0:e})"
        )));
    }

    let p: Vec<f64> = raw_p.iter().map(|x| x / sum_p).collect();
    let p0: Vec<f64> = raw_p0.iter().map(|x| x / sum_p0).collect();
    let q: Vec<f64> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();

    let ranking = rank_descending(&p);
    let optimal = ranking[0];
    let ties = (0..n)
        .filter(|&j| p[optimal] - p[j] <= INDIFFERENCE_TOL)
        .collect();

    Ok(DecisionRecord {
        names: lattice
            .prospects()
            .iter()
            .map(|x| x.name().to_string())
            .collect(),
        raw_p,
        raw_p0,
        raw_q,
        p,
        p0,
        q,
        ranking,
        optimal,
        ties,
    })
}

/// Repeatedly takes the largest remaining value; among values within
/// [`INDIFFERENCE_TOL`] of it, the lowest index goes first.
fn rank_descending(p: &[f64]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..p.len()).collect();
    let mut ranking = Vec::with_capacity(p.len());
    while !remaining.is_empty() {
        let best = remaining
            .iter()
            .map(|&j| p[j])
            .fold(f64::NEG_INFINITY, f64::max);
        let pos = remaining
            .iter()
            .position(|&j| best - p[j] <= INDIFFERENCE_TOL)
            .expect("the maximum is in range");
        ranking.push(remaining.remove(pos));
    }
    ranking
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// Strictly larger probability.
    Preferred,
    /// Probabilities within [`INDIFFERENCE_TOL`].
    Indifferent,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Preferred => ">",
            Relation::Indifferent => "=",
        })
    }
}

/// The ranking together with the relation between each adjacent pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProspectOrdering {
    pub ranking: Vec<usize>,
    /// `relations[k]` relates `ranking[k]` to `ranking[k + 1]`.
    pub relations: Vec<Relation>,
}

impl ProspectOrdering {
    /// e.g. `b > c = a`.
    pub fn render<S: AsRef<str>>(&self, labels: &[S]) -> String {
        let mut out = String::new();
        for (k, &j) in self.ranking.iter().enumerate() {
            if k > 0 {
                out.push_str(&format!(" {} ", self.relations[k - 1]));
            }
            out.push_str(labels[j].as_ref());
        }
        out
    }
}

pub fn order_prospects(record: &DecisionRecord) -> ProspectOrdering {
    let relations = record
        .ranking
        .windows(2)
        .map(|w| {
            if record.p[w[0]] - record.p[w[1]] > INDIFFERENCE_TOL {
                Relation::Preferred
            } else {
                Relation::Indifferent
            }
        })
        .collect();
    ProspectOrdering {
        ranking: record.ranking.clone(),
        relations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{make_strategic, random_state};
    use crate::prospects::{operator_matrix, prospect_from_amplitudes};
    use nalgebra::DVector;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sp() -> MindSpace {
        MindSpace::new(&[2, 2]).unwrap()
    }

    fn half() -> StrategicState {
        make_strategic(&sp(), vec![c(0.5); 4], false).unwrap()
    }

    fn pr(name: &str, amp: [f64; 4]) -> ProspectState {
        prospect_from_amplitudes(&sp(), name, amp.iter().map(|&x| c(x)).collect(), None).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    /// Matrix oracle: `<s|P(e_m) P(pi) P(e_n)|s>` summed over the chosen pairs.
    fn matrix_sum(s: &StrategicState, pi: &ProspectState, diagonal: bool) -> C64 {
        let p = operator_matrix(pi);
        let dim = pi.amplitudes().len();
        let sv = DVector::from_column_slice(s.amplitudes());
        let mut acc = c(0.0);
        for m in 0..dim {
            for n in 0..dim {
                if (m == n) != diagonal {
                    continue;
                }
                let mut em = DVector::from_element(dim, c(0.0));
                em[m] = c(1.0);
                let mut en = DVector::from_element(dim, c(0.0));
                en[n] = c(1.0);
                let proj_m = &em * em.adjoint();
                let proj_n = &en * en.adjoint();
                acc += (sv.adjoint() * proj_m * p.matrix() * proj_n * &sv)[(0, 0)];
            }
        }
        acc
    }

    #[test]
    fn probability_examples() {
        let e11 = make_strategic(&sp(), vec![c(1.0), c(0.0), c(0.0), c(0.0)], false).unwrap();
        assert_eq!(
            raw_probability(&e11, &pr("a", [1.0, 0.0, 0.0, 0.0])).unwrap(),
            1.0
        );
        assert_eq!(
            raw_probability(&e11, &pr("b", [0.0, 0.0, 0.0, 1.0])).unwrap(),
            0.0
        );
        let pi = pr("c", [H, H, 0.0, 0.0]);
        let oracle = operator_matrix(&pi).average(half().vector());
        assert!(close(oracle.re, 0.5));
        assert!(close(raw_probability(&half(), &pi).unwrap(), 0.5));
    }

    #[test]
    fn utility_examples() {
        let e11 = make_strategic(&sp(), vec![c(1.0), c(0.0), c(0.0), c(0.0)], false).unwrap();
        assert_eq!(
            utility_factor_raw(&e11, &pr("a", [1.0, 0.0, 0.0, 0.0])).unwrap(),
            1.0
        );
        for pi in [pr("plus", [H, H, 0.0, 0.0]), pr("minus", [H, -H, 0.0, 0.0])] {
            let oracle = matrix_sum(&half(), &pi, true);
            assert!(close(oracle.re, 0.25));
            assert!(close(utility_factor_raw(&half(), &pi).unwrap(), 0.25));
        }
    }

    #[test]
    fn attraction_examples() {
        let s = random_state(&sp(), 7);
        for k in 0..4 {
            let mut a = [0.0; 4];
            a[k] = 1.0;
            assert_eq!(attraction_factor_raw(&s, &pr("e", a)).unwrap(), 0.0);
        }
        let plus = pr("plus", [H, H, 0.0, 0.0]);
        let minus = pr("minus", [H, -H, 0.0, 0.0]);
        assert!(close(matrix_sum(&half(), &plus, false).re, 0.25));
        assert!(close(matrix_sum(&half(), &minus, false).re, -0.25));
        assert!(close(attraction_factor_raw(&half(), &plus).unwrap(), 0.25));
        assert!(close(
            attraction_factor_raw(&half(), &minus).unwrap(),
            -0.25
        ));

        let terms = interference_terms(&half(), &plus).unwrap();
        assert_eq!(terms.len(), 2);
        let total: C64 = terms.iter().map(|t| t.2).sum();
        assert!(close(total.re, 0.25) && total.im == 0.0);
    }

    #[test]
    fn space_mismatch_is_reported() {
        let other = MindSpace::new(&[4]).unwrap();
        let pi = prospect_from_amplitudes(&other, "x", vec![c(1.0); 4], None).unwrap();
        assert!(matches!(
            raw_probability(&half(), &pi),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            utility_factor_raw(&half(), &pi),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            attraction_factor_raw(&half(), &pi),
            Err(Error::Mismatch(_))
        ));
        assert!(ProspectLattice::new(vec![pr("a", [1.0, 0.0, 0.0, 0.0]), pi]).is_err());
    }

    #[test]
    fn lattice_validation() {
        assert!(ProspectLattice::new(vec![]).is_err());
        let a = pr("a", [1.0, 0.0, 0.0, 0.0]);
        assert!(ProspectLattice::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn single_elementary_prospect() {
        let s = make_strategic(&sp(), vec![c(1.0), c(0.0), c(0.0), c(0.0)], false).unwrap();
        let l = ProspectLattice::new(vec![pr("e", [1.0, 0.0, 0.0, 0.0])]).unwrap();
        let r = decompose(&s, &l).unwrap();
        assert_eq!(
            (r.p.clone(), r.p0.clone(), r.q.clone()),
            (vec![1.0], vec![1.0], vec![0.0])
        );
        assert_eq!(r.optimal, 0);
        assert_eq!(r.ties, vec![0]);
    }

    #[test]
    fn two_prospect_interference() {
        let l = ProspectLattice::new(vec![
            pr("a1", [H, H, 0.0, 0.0]),
            pr("a2", [0.0, 0.0, H, -H]),
        ])
        .unwrap();
        let r = decompose(&half(), &l).unwrap();
        let expect = |got: &[f64], want: &[f64]| {
            assert!(
                got.iter().zip(want).all(|(g, w)| close(*g, *w)),
                "{got:?} vs {want:?}"
            )
        };
        expect(&r.raw_p, &[0.5, 0.0]);
        expect(&r.raw_p0, &[0.25, 0.25]);
        expect(&r.raw_q, &[0.25, -0.25]);
        expect(&r.p, &[1.0, 0.0]);
        expect(&r.p0, &[0.5, 0.5]);
        expect(&r.q, &[0.5, -0.5]);
        assert!(r.q.iter().sum::<f64>().abs() <= 1e-12);
        assert_eq!(r.optimal, 0);
        assert_eq!(r.ties, vec![0]);
        let ord = order_prospects(&r);
        assert_eq!(ord.relations, vec![Relation::Preferred]);
        assert_eq!(ord.render(&r.names), "a1 > a2");
    }

    #[test]
    fn duplicate_amplitudes_tie_to_lowest_index() {
        let l = ProspectLattice::new(vec![pr("x", [H, H, 0.0, 0.0]), pr("y", [H, H, 0.0, 0.0])])
            .unwrap();
        let r = decompose(&half(), &l).unwrap();
        assert_eq!(r.optimal, 0);
        assert_eq!(r.ties, vec![0, 1]);
        assert_eq!(order_prospects(&r).render(&r.names), "x = y");
    }

    #[test]
    fn degenerate_lattice_is_rejected() {
        let s = make_strategic(&sp(), vec![c(1.0), c(0.0), c(0.0), c(0.0)], false).unwrap();
        let l = ProspectLattice::new(vec![
            pr("a", [0.0, 1.0, 0.0, 0.0]),
            pr("b", [0.0, 0.0, H, H]),
        ])
        .unwrap();
        assert!(matches!(
            decompose(&s, &l),
            Err(Error::DegenerateLattice(_))
        ));
    }

    fn record_with(p: Vec<f64>) -> DecisionRecord {
        let ranking = rank_descending(&p);
        let n = p.len();
        DecisionRecord {
            names: (1..=n).map(|k| k.to_string()).collect(),
            raw_p: p.clone(),
            raw_p0: p.clone(),
            raw_q: vec![0.0; n],
            p0: p.clone(),
            q: vec![0.0; n],
            optimal: ranking[0],
            ties: vec![ranking[0]],
            ranking,
            p,
        }
    }

    #[test]
    fn ordering_examples() {
        let r = record_with(vec![0.2, 0.5, 0.3]);
        let ord = order_prospects(&r);
        assert_eq!(ord.ranking, vec![1, 2, 0]);
        assert_eq!(ord.render(&r.names), "2 > 3 > 1");
        let r = record_with(vec![0.5, 0.5]);
        assert_eq!(order_prospects(&r).render(&r.names), "1 = 2");
        // within tolerance counts as equal even if the later one is larger
        let r = record_with(vec![0.5, 0.5 + 1e-13]);
        assert_eq!(r.ranking, vec![0, 1]);
        assert_eq!(order_prospects(&r).relations, vec![Relation::Indifferent]);
    }
}
