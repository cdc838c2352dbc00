//! Random instance generators and the dense-matrix oracle shared by the
//! integration tests. The oracle only uses `operator_matrix` and explicit
//! basis projectors; it never calls the amplitude-level formulas.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qdt::decision::ProspectLattice;
use qdt::hilbert::{random_state, MindSpace, StrategicState};
use qdt::prospects::{operator_matrix, prospect_from_amplitudes, ProspectState};
use qdt::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const DIMS_POOL: &[&[usize]] = &[&[2], &[2, 2], &[3, 2], &[2, 2, 2], &[4, 4]];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick_dims(rng: &mut ChaCha8Rng, pool: &[&[usize]]) -> MindSpace {
    MindSpace::new(pool[rng.random_range(0..pool.len())]).unwrap()
}

/// Gaussian amplitudes; roughly a third of the entries are zeroed so that
/// prospects have nontrivial supports. Never all zero.
pub fn random_amplitudes(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let amp: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                if rng.random_bool(0.3) {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(re, im)
                }
            })
            .collect();
        if amp.iter().any(|z| z.norm() > 1e-3) {
            return amp;
        }
    }
}

pub fn random_prospect(rng: &mut ChaCha8Rng, space: &MindSpace, name: &str) -> ProspectState {
    let amp = random_amplitudes(rng, space.total_dim());
    prospect_from_amplitudes(space, name, amp, None).unwrap()
}

pub fn random_lattice(rng: &mut ChaCha8Rng, space: &MindSpace, n: usize) -> ProspectLattice {
    let prospects = (0..n)
        .map(|j| random_prospect(rng, space, &format!("p{j}")))
        .collect();
    ProspectLattice::new(prospects).unwrap()
}

pub fn random_strategic(rng: &mut ChaCha8Rng, space: &MindSpace) -> StrategicState {
    random_state(space, rng.random())
}

/// Dense evaluation of `<s|P|s>`, `sum_n <s|E_n P E_n|s>` and
/// `sum_{m != n} <s|E_m P E_n|s>` with explicit projectors `E_n = |e_n><e_n|`.
pub struct DenseFactors {
    pub p: C64,
    pub p0: C64,
    pub q: C64,
}

pub fn dense_factors(s: &StrategicState, pi: &ProspectState) -> DenseFactors {
    let p_op = operator_matrix(pi);
    let pm = p_op.matrix();
    let dim = pm.nrows();
    let sv = DVector::from_column_slice(s.amplitudes());
    let zero = C64::new(0.0, 0.0);

    // v_n = E_n s, w_n = P E_n s
    let mut v = Vec::with_capacity(dim);
    let mut w = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut e = DMatrix::from_element(dim, dim, zero);
        e[(n, n)] = C64::new(1.0, 0.0);
        let vn = &e * &sv;
        w.push(pm * &vn);
        v.push(vn);
    }
    let mut p0 = zero;
    let mut q = zero;
    for (m, vm) in v.iter().enumerate() {
        for (n, wn) in w.iter().enumerate() {
            let term = vm.dotc(wn);
            if m == n {
                p0 += term;
            } else {
                q += term;
            }
        }
    }
    DenseFactors {
        p: (sv.adjoint() * pm * &sv)[(0, 0)],
        p0,
        q,
    }
}
