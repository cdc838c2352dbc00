//! Actions, modes, elementary prospects and the classical event algebra.
//!
//! An [`ActionRing`] is an ordered list of actions, each with an ordered list
//! of mutually exclusive modes. Picking one mode per action gives an
//! elementary prospect, labelled by a [`MultiIndex`]. Sets of elementary
//! prospects form [`Event`]s, which carry the classical support of composite
//! prospects.
//!
//! Basis order is lexicographic with the first action varying slowest. Every
//! flat index in the crate is derived from [`flat_index`] and [`multi_index`].
//! Mode indices in multi-indices are 1-based.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{validation, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    pub modes: Vec<String>,
}

impl Action {
    pub fn new<S: Into<String>>(name: S, modes: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            modes: modes.into_iter().map(Into::into).collect(),
        }
    }
}

/// The declared actions and their modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRing {
    actions: Vec<Action>,
    dims: Vec<usize>,
}

impl ActionRing {
    /// Validates names and shape: at least one action, at least one mode per
    /// action, unique action names, unique mode names within an action.
    pub fn new(actions: Vec<Action>) -> Result<Self> {
        if actions.is_empty() {
            return Err(validation("an action ring needs at least one action"));
        }
        let mut seen = HashSet::new();
        for action in &actions {
            if action.name.is_empty() {
                return Err(validation("action names must be nonempty"));
            }
            if !seen.insert(action.name.as_str()) {
                return Err(validation(format!(
                    "duplicate action name `{}`",
                    action.name
                )));
            }
            if action.modes.is_empty() {
                return Err(validation(format!("action `{}` has no modes", action.name)));
            }
            let mut modes = HashSet::new();
            for mode in &action.modes {
                if mode.is_empty() {
                    return Err(validation(format!(
                        "action `{}` has an empty mode name",
                        action.name
                    )));
                }
                if !modes.insert(mode.as_str()) {
                    return Err(validation(format!(
                        "duplicate mode `{mode}` in action `{}`",
                        action.name
                    )));
                }
            }
        }
        let dims = actions.iter().map(|a| a.modes.len()).collect();
        Ok(Self { actions, dims })
    }

    /// A ring with generated names (`A1`, `A2`, ... and modes `A1.1`, ...).
    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        let actions = dims
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let name = format!("A{}", i + 1);
                let modes = (1..=m).map(|k| format!("{name}.{k}")).collect();
                Action { name, modes }
            })
            .collect();
        Self::new(actions)
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Mode counts `[M_1, .., M_N]`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn action_index(&self, name: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| validation(format!("unknown action `{name}`")))
    }

    /// 1-based index of `mode` within action `action`.
    pub fn mode_index(&self, action: usize, mode: &str) -> Result<usize> {
        let a = self
            .actions
            .get(action)
            .ok_or_else(|| validation(format!("action index {action} out of range")))?;
        a.modes
            .iter()
            .position(|m| m == mode)
            .map(|k| k + 1)
            .ok_or_else(|| validation(format!("unknown mode `{mode}` for action `{}`", a.name)))
    }

    /// Human-readable label of an elementary prospect, e.g. `(buy, stay)`.
    pub fn label(&self, n: &MultiIndex) -> String {
        let parts: Vec<&str> = self
            .actions
            .iter()
            .zip(n.modes())
            .map(|(a, &k)| a.modes[k - 1].as_str())
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// One mode per action, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(modes: Vec<usize>) -> Self {
        Self(modes)
    }

    pub fn modes(&self) -> &[usize] {
        &self.0
    }

    /// Checks length and `1 <= nu[i] <= dims[i]`.
    pub fn check(&self, dims: &[usize]) -> Result<()> {
        if self.0.len() != dims.len() {
            return Err(validation(format!(
                "multi-index {self} has {} entries, expected {}",
                self.0.len(),
                dims.len()
            )));
        }
        for (i, (&nu, &m)) in self.0.iter().zip(dims).enumerate() {
            if nu == 0 || nu > m {
                return Err(validation(format!(
                    "multi-index {self}: entry {} is {nu}, expected 1..={m}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl<const K: usize> From<[usize; K]> for MultiIndex {
    fn from(v: [usize; K]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, nu) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{nu}")?;
        }
        write!(f, ")")
    }
}

/// Flat (0-based) basis index of `n`: `sum_i (nu_i - 1) * prod_{k>i} M_k`.
pub fn flat_index(dims: &[usize], n: &MultiIndex) -> Result<usize> {
    n.check(dims)?;
    Ok(n.0
        .iter()
        .zip(dims)
        .fold(0, |acc, (&nu, &m)| acc * m + (nu - 1)))
}

/// Inverse of [`flat_index`]. `flat` must be below `prod(dims)`.
pub fn multi_index(dims: &[usize], mut flat: usize) -> MultiIndex {
    let mut modes = vec![0; dims.len()];
    for (slot, &m) in modes.iter_mut().zip(dims).rev() {
        *slot = flat % m + 1;
        flat /= m;
    }
    MultiIndex(modes)
}

/// All elementary prospects in basis order.
pub fn enumerate_elementary(ring: &ActionRing) -> Vec<MultiIndex> {
    odometer(ring.dims())
}

fn odometer(dims: &[usize]) -> Vec<MultiIndex> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![1; dims.len()];
    for _ in 0..total {
        out.push(MultiIndex(cur.clone()));
        for i in (0..dims.len()).rev() {
            if cur[i] < dims[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
    out
}

/// A set of elementary prospects over one ring shape.
///
/// The empty event is the impossible action; the full grid is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    dims: Vec<usize>,
    members: BTreeSet<MultiIndex>,
}

impl Event {
    pub fn new(ring: &ActionRing, members: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let dims = ring.dims().to_vec();
        let members = members
            .into_iter()
            .map(|n| n.check(&dims).map(|_| n))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Self { dims, members })
    }

    pub fn impossible(ring: &ActionRing) -> Self {
        Self {
            dims: ring.dims().to_vec(),
            members: BTreeSet::new(),
        }
    }

    pub fn identity(ring: &ActionRing) -> Self {
        Self {
            dims: ring.dims().to_vec(),
            members: enumerate_elementary(ring).into_iter().collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Members in basis order.
    pub fn members(&self) -> impl ExactSizeIterator<Item = &MultiIndex> {
        self.members.iter()
    }

    pub fn contains(&self, n: &MultiIndex) -> bool {
        self.members.contains(n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.members.len() == self.dims.iter().product::<usize>()
    }

    /// Flat indices of the members, ascending.
    pub fn flat_indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .map(|n| flat_index(&self.dims, n).expect("members are validated"))
            .collect()
    }

    fn same_ring(&self, other: &Event) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::Mismatch(format!(
                "events over rings of shape {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }
}

/// Joint action `AB`: set intersection. Disjoint events give the impossible event.
pub fn event_conjunction(a: &Event, b: &Event) -> Result<Event> {
    a.same_ring(b)?;
    Ok(Event {
        dims: a.dims.clone(),
        members: a.members.intersection(&b.members).cloned().collect(),
    })
}

/// Composite action `A + B`: set union.
pub fn event_union(a: &Event, b: &Event) -> Result<Event> {
    a.same_ring(b)?;
    Ok(Event {
        dims: a.dims.clone(),
        members: a.members.union(&b.members).cloned().collect(),
    })
}

/// Support of a composite prospect: the Cartesian product of one nonempty
/// mode subset (1-based) per action.
pub fn prospect_support(ring: &ActionRing, subsets: &[Vec<usize>]) -> Result<Event> {
    let dims = ring.dims();
    if subsets.len() != dims.len() {
        return Err(validation(format!(
            "expected {} mode subsets, got {}",
            dims.len(),
            subsets.len()
        )));
    }
    let mut sorted = Vec::with_capacity(subsets.len());
    for (i, subset) in subsets.iter().enumerate() {
        let name = &ring.actions()[i].name;
        if subset.is_empty() {
            return Err(validation(format!("empty mode subset for action `{name}`")));
        }
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&k| k == 0 || k > dims[i]) {
            return Err(validation(format!(
                "mode {bad} out of range 1..={} for action `{name}`",
                dims[i]
            )));
        }
        sorted.push(set.into_iter().collect::<Vec<_>>());
    }
    let lens: Vec<usize> = sorted.iter().map(Vec::len).collect();
    let members = odometer(&lens)
        .into_iter()
        .map(|pick| {
            MultiIndex(
                pick.0
                    .iter()
                    .zip(&sorted)
                    .map(|(&k, set)| set[k - 1])
                    .collect(),
            )
        })
        .collect();
    Ok(Event {
        dims: dims.to_vec(),
        members,
    })
}

/// [`prospect_support`] with mode names instead of indices, in action order.
pub fn prospect_support_named<S: AsRef<str>>(
    ring: &ActionRing,
    subsets: &[Vec<S>],
) -> Result<Event> {
    let resolved = subsets
        .iter()
        .enumerate()
        .map(|(i, modes)| {
            modes
                .iter()
                .map(|m| ring.mode_index(i, m.as_ref()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    prospect_support(ring, &resolved)
}
