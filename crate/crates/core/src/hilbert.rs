//! Mind space, state vectors and strategic states.
//!
//! The mind space is the tensor product of one mode space per action, stored
//! densely: a state is one complex amplitude per basic state, indexed by the
//! flat order from [`crate::action_algebra`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::action_algebra::{flat_index, multi_index, ActionRing, MultiIndex};
use crate::error::{validation, Error, Result};
use crate::{C64, NORM_SLACK};

/// Tensor product of mode spaces with dimensions `[M_1, .., M_N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MindSpace {
    dims: Vec<usize>,
    total_dim: usize,
}

impl MindSpace {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(validation(format!("invalid mode dimensions {dims:?}")));
        }
        let total_dim = dims
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| validation(format!("mind space {dims:?} is too large")))?;
        Ok(Self {
            dims: dims.to_vec(),
            total_dim,
        })
    }

    pub fn from_ring(ring: &ActionRing) -> Self {
        Self::new(ring.dims()).expect("rings are validated")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn flat_index(&self, n: &MultiIndex) -> Result<usize> {
        flat_index(&self.dims, n)
    }

    pub fn multi_index(&self, flat: usize) -> MultiIndex {
        assert!(flat < self.total_dim, "flat index {flat} out of range");
        multi_index(&self.dims, flat)
    }

    pub(crate) fn check_same(&self, other: &MindSpace) -> Result<()> {
        if self != other {
            return Err(Error::Mismatch(format!(
                "mind spaces {:?} and {:?} differ",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.total_dim {
            return Err(validation(format!(
                "{what} has {len} amplitudes, mind space {:?} needs {}",
                self.dims, self.total_dim
            )));
        }
        Ok(())
    }
}

/// Complex amplitudes over the basic states of a [`MindSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: MindSpace,
    amp: Vec<C64>,
}

impl StateVector {
    pub fn new(space: &MindSpace, amp: Vec<C64>) -> Result<Self> {
        space.check_len(amp.len(), "state vector")?;
        if let Some(k) = amp
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(validation(format!("amplitude {k} is not finite")));
        }
        Ok(Self {
            space: space.clone(),
            amp,
        })
    }

    pub fn space(&self) -> &MindSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// One-hot vector at the flat index of `n`.
pub fn basic_state(space: &MindSpace, n: &MultiIndex) -> Result<StateVector> {
    let k = space.flat_index(n)?;
    let mut amp = vec![C64::new(0.0, 0.0); space.total_dim()];
    amp[k] = C64::new(1.0, 0.0);
    Ok(StateVector {
        space: space.clone(),
        amp,
    })
}

/// Kronecker product of one mode-space vector per action, first factor slowest.
pub fn tensor(space: &MindSpace, factors: &[Vec<C64>]) -> Result<StateVector> {
    if factors.len() != space.dims().len() {
        return Err(validation(format!(
            "expected {} factors, got {}",
            space.dims().len(),
            factors.len()
        )));
    }
    let mut amp = vec![C64::new(1.0, 0.0)];
    for (i, (f, &m)) in factors.iter().zip(space.dims()).enumerate() {
        if f.len() != m {
            return Err(validation(format!(
                "factor {} has length {}, expected {m}",
                i + 1,
                f.len()
            )));
        }
        amp = amp
            .iter()
            .flat_map(|&x| f.iter().map(move |&y| x * y))
            .collect();
    }
    StateVector::new(space, amp)
}

/// `<a|b> = sum_n conj(a_n) b_n`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.space.check_same(&b.space)?;
    Ok(dot_conj(&a.amp, &b.amp))
}

pub(crate) fn dot_conj(a: &[C64], b: &[C64]) -> C64 {
    a.iter()
        .zip(b)
        .fold(C64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

/// Unit-norm reference state of the decision maker.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategicState(StateVector);

impl StrategicState {
    pub fn vector(&self) -> &StateVector {
        &self.0
    }

    pub fn space(&self) -> &MindSpace {
        self.0.space()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.amplitudes()
    }
}

impl AsRef<StateVector> for StrategicState {
    fn as_ref(&self) -> &StateVector {
        &self.0
    }
}

/// Builds a strategic state. With `normalize` the vector is rescaled to unit
/// norm; otherwise its norm must already be 1 within [`NORM_SLACK`].
pub fn make_strategic(space: &MindSpace, c: Vec<C64>, normalize: bool) -> Result<StrategicState> {
    let v = StateVector::new(space, c)?;
    let norm = v.norm();
    if norm == 0.0 {
        return Err(validation("strategic state is the zero vector"));
    }
    if normalize {
        let amp = v.amp.iter().map(|z| z / norm).collect();
        return Ok(StrategicState(StateVector {
            space: v.space,
            amp,
        }));
    }
    if (norm - 1.0).abs() > NORM_SLACK {
        return Err(validation(format!(
            "strategic state has norm {norm}, expected 1 (set normalize to rescale)"
        )));
    }
    Ok(StrategicState(v))
}

/// Seeded random strategic state.
///
/// The generator is ChaCha8 seeded with [`SeedableRng::seed_from_u64`].
/// Each amplitude takes two draws from the standard normal, real part first,
/// in basis order; the vector is then normalized.
pub fn random_state(space: &MindSpace, seed: u64) -> StrategicState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let amp: Vec<C64> = (0..space.total_dim())
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        if let Ok(s) = make_strategic(space, amp, true) {
            return s;
        }
    }
}
