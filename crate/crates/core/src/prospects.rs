//! Prospect states and their rank-1 operators.
//!
//! A prospect state is an arbitrary nonzero vector in the mind space; it need
//! not be normalized nor orthogonal to other prospects. Its operator
//! `P = |pi><pi|` is self-adjoint and satisfies `P^2 = <pi|pi> P`, so it is a
//! projector only when `<pi|pi> = 1`.

use nalgebra::{DMatrix, DVector};

use crate::action_algebra::Event;
use crate::error::{validation, Error, Result};
use crate::hilbert::{MindSpace, StateVector};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct ProspectState {
    name: String,
    state: StateVector,
    support: Option<Event>,
}

impl ProspectState {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &MindSpace {
        self.state.space()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.state.amplitudes()
    }

    pub fn vector(&self) -> &StateVector {
        &self.state
    }

    pub fn support(&self) -> Option<&Event> {
        self.support.as_ref()
    }

    /// `<pi|pi>`.
    pub fn norm_sqr(&self) -> f64 {
        self.state.norm_sqr()
    }

    /// Same prospect with every amplitude multiplied by `lambda`.
    pub fn scaled(&self, lambda: C64) -> Result<Self> {
        let amp = self.amplitudes().iter().map(|a| a * lambda).collect();
        prospect_from_amplitudes(self.space(), &self.name, amp, self.support.clone())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Stores `amp` verbatim. If `support` is given, every amplitude outside it
/// must be exactly zero.
pub fn prospect_from_amplitudes(
    space: &MindSpace,
    name: &str,
    amp: Vec<C64>,
    support: Option<Event>,
) -> Result<ProspectState> {
    let state = StateVector::new(space, amp)?;
    if state.amplitudes().iter().all(|a| *a == C64::new(0.0, 0.0)) {
        return Err(validation(format!("prospect `{name}` is the zero vector")));
    }
    if let Some(event) = &support {
        if event.dims() != space.dims() {
            return Err(Error::Mismatch(format!(
                "support of prospect `{name}` is over ring {:?}, space is {:?}",
                event.dims(),
                space.dims()
            )));
        }
        let inside = event.flat_indices();
        let mut next = inside.iter().peekable();
        for (k, a) in state.amplitudes().iter().enumerate() {
            if next.peek() == Some(&&k) {
                next.next();
            } else if *a != C64::new(0.0, 0.0) {
                return Err(validation(format!(
                    "prospect `{name}` has amplitude {a} at {} outside its support",
                    space.multi_index(k)
                )));
            }
        }
    }
    Ok(ProspectState {
        name: name.to_string(),
        state,
        support,
    })
}

/// Equal-weight superposition over `event`: amplitude `phase_k / sqrt(|event|)`
/// on member `k` (members in basis order), zero elsewhere. Phases default to
/// `+1` and must have unit modulus.
pub fn prospect_from_support_uniform(
    space: &MindSpace,
    name: &str,
    event: &Event,
    phases: Option<&[C64]>,
) -> Result<ProspectState> {
    if event.is_empty() {
        return Err(validation(format!(
            "prospect `{name}` has an empty support"
        )));
    }
    if let Some(ph) = phases {
        if ph.len() != event.len() {
            return Err(validation(format!(
                "prospect `{name}`: {} phases for {} support members",
                ph.len(),
                event.len()
            )));
        }
        if let Some(k) = ph
            .iter()
            .position(|z| (z.norm() - 1.0).abs() > crate::NORM_SLACK)
        {
            return Err(validation(format!(
                "prospect `{name}`: phase {k} has modulus {}, expected 1",
                ph[k].norm()
            )));
        }
    }
    if event.dims() != space.dims() {
        return Err(Error::Mismatch(format!(
            "support of prospect `{name}` is over ring {:?}, space is {:?}",
            event.dims(),
            space.dims()
        )));
    }
    let weight = (1.0 / event.len() as f64).sqrt();
    let mut amp = vec![C64::new(0.0, 0.0); space.total_dim()];
    for (k, flat) in event.flat_indices().into_iter().enumerate() {
        let phase = phases.map_or(C64::new(1.0, 0.0), |p| p[k]);
        amp[flat] = phase * weight;
    }
    prospect_from_amplitudes(space, name, amp, Some(event.clone()))
}

/// Dense `|pi><pi|`. Only built for inspection and cross-checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ProspectOperatorMatrix(DMatrix<C64>);

impl ProspectOperatorMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `<s|P|s>`.
    pub fn average(&self, s: &StateVector) -> C64 {
        let v = DVector::from_column_slice(s.amplitudes());
        (v.adjoint() * &self.0 * &v)[(0, 0)]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        max_abs(&(&self.0 - self.0.adjoint())) <= tol
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entry `(m, n)` is `a_m * conj(a_n)`.
pub fn operator_matrix(prospect: &ProspectState) -> ProspectOperatorMatrix {
    let a = prospect.amplitudes();
    let dim = a.len();
    ProspectOperatorMatrix(DMatrix::from_fn(dim, dim, |m, n| a[m] * a[n].conj()))
}

/// Whether the prospect operator is idempotent, i.e. `|<pi|pi> - 1| <= tol`.
///
/// Since `P^2 - P = (<pi|pi> - 1) P`, this is the norm test rather than a
/// dense matrix comparison.
pub fn is_projector(prospect: &ProspectState, tol: f64) -> bool {
    (prospect.norm_sqr() - 1.0).abs() <= tol
}
