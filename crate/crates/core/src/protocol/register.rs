use std::f64::consts::PI;
use std::fmt;

use rand::Rng;

use super::keys::Fingerprint;
use crate::error::{Error, Result};
use crate::quantum_core::{
    apply_rotation, measure_in_rotated_basis, measure_z, prepare_state, swap_test, AngleIndex,
    PureState, SwapOutcome,
};

#[derive(Clone)]
enum Slot {
    /// Prepared at an exact rotation index.
    Exact(AngleIndex),
    /// Single-qubit state after a rotation that is not index-exact.
    Analog(PureState),
    /// Entangled away by a SWAP test.
    Consumed,
}

enum Body {
    Product(Vec<Slot>),
    /// Arbitrary joint state whose first `data_qubits` qubits are the
    /// register; the rest is an ancilla held elsewhere.
    Joint { state: PureState, data_qubits: usize },
}

/// Simulated quantum register.
///
/// Holders may rotate, measure and SWAP-test qubits but cannot read the
/// underlying description: only the protocol module can, and only for an
/// owner holding the matching credential (see
/// [`describe_register`](super::describe_register)). The type is
/// deliberately not `Clone`.
pub struct QuantumRegister {
    body: Body,
    owner: Option<Fingerprint>,
}

impl fmt::Debug for QuantumRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantumRegister")
            .field("qubits", &self.len())
            .finish_non_exhaustive()
    }
}

impl QuantumRegister {
    pub(super) fn prepared(indices: Vec<AngleIndex>, owner: Fingerprint) -> Self {
        Self {
            body: Body::Product(indices.into_iter().map(Slot::Exact).collect()),
            owner: Some(owner),
        }
    }

    /// Register of independently prepared single-qubit states.
    pub fn from_product_states(states: Vec<PureState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidArgument("empty register".into()));
        }
        if let Some(bad) = states.iter().find(|s| s.num_qubits() != 1) {
            return Err(Error::InvalidArgument(format!(
                "product registers take single qubits, got a {}-qubit state",
                bad.num_qubits()
            )));
        }
        Ok(Self {
            body: Body::Product(states.into_iter().map(Slot::Analog).collect()),
            owner: None,
        })
    }

    /// `|0_z>^{⊗len}`.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_product_states(vec![PureState::zeros(1); len])
    }

    /// Register made of the first `data_qubits` qubits of `state`; the
    /// remaining qubits stay with whoever built it and are never addressed.
    pub fn with_ancilla(state: PureState, data_qubits: usize) -> Result<Self> {
        if data_qubits == 0 || data_qubits > state.num_qubits() {
            return Err(Error::InvalidArgument(format!(
                "{data_qubits} data qubits requested from a {}-qubit state",
                state.num_qubits()
            )));
        }
        Ok(Self {
            body: Body::Joint { state, data_qubits },
            owner: None,
        })
    }

    pub fn len(&self) -> usize {
        match &self.body {
            Body::Product(slots) => slots.len(),
            Body::Joint { data_qubits, .. } => *data_qubits,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, qubit: usize) -> Result<()> {
        if qubit >= self.len() {
            return Err(Error::QubitOutOfRange {
                qubit,
                count: self.len(),
            });
        }
        if let Body::Product(slots) = &self.body {
            if matches!(slots[qubit], Slot::Consumed) {
                return Err(Error::QubitConsumed(qubit));
            }
        }
        Ok(())
    }

    fn slot_state(slot: &Slot) -> PureState {
        match slot {
            Slot::Exact(idx) => prepare_state(*idx),
            Slot::Analog(st) => st.clone(),
            Slot::Consumed => unreachable!("checked by caller"),
        }
    }

    /// Applies `R(theta)` to one qubit.
    pub fn apply_rotation(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.check(qubit)?;
        match &mut self.body {
            Body::Product(slots) => {
                let st = apply_rotation(&Self::slot_state(&slots[qubit]), 0, theta)?;
                slots[qubit] = Slot::Analog(st);
            }
            Body::Joint { state, .. } => *state = apply_rotation(state, qubit, theta)?,
        }
        Ok(())
    }

    /// Applies `R(pi)`. Index-exact on freshly prepared qubits.
    pub fn apply_half_turn(&mut self, qubit: usize) -> Result<()> {
        self.check(qubit)?;
        if let Body::Product(slots) = &mut self.body {
            if let Slot::Exact(idx) = slots[qubit] {
                slots[qubit] = Slot::Exact(idx.flipped());
                return Ok(());
            }
        }
        self.apply_rotation(qubit, PI)
    }

    /// Applies `R(s*theta_n)^-1`, exactly when the qubit carries an index of
    /// the same precision.
    pub(crate) fn unrotate(&mut self, qubit: usize, by: AngleIndex) -> Result<()> {
        self.check(qubit)?;
        if let Body::Product(slots) = &mut self.body {
            if let Slot::Exact(idx) = slots[qubit] {
                if idx.n() == by.n() {
                    slots[qubit] = Slot::Exact(idx.sub(by)?);
                    return Ok(());
                }
            }
        }
        self.apply_rotation(qubit, -by.radians())
    }

    /// Z-basis measurement; the qubit collapses.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        self.measure_in_basis(qubit, 0.0, rng)
    }

    /// Measurement in `{R(phi)|0_z>, R(phi)|1_z>}`; the qubit collapses.
    pub fn measure_in_basis<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        phi: f64,
        rng: &mut R,
    ) -> Result<u8> {
        self.check(qubit)?;
        match &mut self.body {
            Body::Product(slots) => {
                let st = Self::slot_state(&slots[qubit]);
                let m = if phi == 0.0 {
                    measure_z(&st, 0, rng)?
                } else {
                    measure_in_rotated_basis(&st, 0, phi, rng)?
                };
                slots[qubit] = match (&slots[qubit], phi == 0.0) {
                    // Z eigenstates are exact indices at any precision
                    (Slot::Exact(idx), true) => {
                        let zero = AngleIndex::zero(idx.n())?;
                        Slot::Exact(if m.outcome == 0 { zero } else { zero.flipped() })
                    }
                    _ => Slot::Analog(m.post_state),
                };
                Ok(m.outcome)
            }
            Body::Joint { state, .. } => {
                let m = if phi == 0.0 {
                    measure_z(state, qubit, rng)?
                } else {
                    measure_in_rotated_basis(state, qubit, phi, rng)?
                };
                *state = m.post_state;
                Ok(m.outcome)
            }
        }
    }

    /// SWAP test between `self[qubit]` and `other[other_qubit]`.
    ///
    /// The two qubits end up entangled with each other and are marked
    /// consumed in both registers.
    pub fn swap_test<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        other: &mut QuantumRegister,
        other_qubit: usize,
        rng: &mut R,
    ) -> Result<SwapOutcome> {
        self.check(qubit)?;
        other.check(other_qubit)?;
        let (Body::Product(mine), Body::Product(theirs)) = (&mut self.body, &mut other.body)
        else {
            return Err(Error::InvalidArgument(
                "SWAP test needs unentangled qubits".into(),
            ));
        };
        let a = Self::slot_state(&mine[qubit]);
        let b = Self::slot_state(&theirs[other_qubit]);
        let result = swap_test(&a, &b, rng)?;
        mine[qubit] = Slot::Consumed;
        theirs[other_qubit] = Slot::Consumed;
        Ok(result.outcome)
    }

    pub(super) fn owner(&self) -> Option<&Fingerprint> {
        self.owner.as_ref()
    }

    /// Exact descriptors, if every qubit still carries one.
    pub(super) fn descriptors(&self) -> Option<Vec<AngleIndex>> {
        match &self.body {
            Body::Product(slots) => slots
                .iter()
                .map(|s| match s {
                    Slot::Exact(idx) => Some(*idx),
                    _ => None,
                })
                .collect(),
            Body::Joint { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::PrivateKey;
    use crate::rng::seeded;

    #[test]
    fn half_turn_stays_exact() {
        let key = PrivateKey::new(5, vec![3, 7], None).unwrap();
        let mut reg = key.prepare_public_register();
        reg.apply_half_turn(1).unwrap();
        let d = reg.descriptors().unwrap();
        assert_eq!(d[0].s(), 3);
        assert_eq!(d[1].s(), 7 + 16);
    }

    #[test]
    fn float_rotation_leaves_exact_form() {
        let key = PrivateKey::new(5, vec![3], None).unwrap();
        let mut reg = key.prepare_public_register();
        reg.apply_rotation(0, 0.1).unwrap();
        assert!(reg.descriptors().is_none());
    }

    #[test]
    fn swap_consumes_both_qubits() {
        let key = PrivateKey::new(5, vec![3, 4], None).unwrap();
        let mut a = key.prepare_public_register();
        let mut b = key.prepare_public_register();
        let mut rng = seeded(1);
        assert_eq!(a.swap_test(0, &mut b, 0, &mut rng).unwrap(), SwapOutcome::Pass);
        assert_eq!(a.measure_z(0, &mut rng), Err(Error::QubitConsumed(0)));
        assert_eq!(b.apply_rotation(0, 1.0), Err(Error::QubitConsumed(0)));
        assert!(a.measure_z(1, &mut rng).is_ok());
    }

    #[test]
    fn joint_register_hides_ancilla() {
        let reg = QuantumRegister::with_ancilla(PureState::zeros(3), 2).unwrap();
        assert_eq!(reg.len(), 2);
        assert!(QuantumRegister::with_ancilla(PureState::zeros(2), 3).is_err());
        let mut reg = reg;
        let mut rng = seeded(2);
        assert_eq!(reg.measure_z(1, &mut rng).unwrap(), 0);
        assert!(reg.measure_z(2, &mut rng).is_err());
    }

    #[test]
    fn debug_does_not_print_state() {
        let key = PrivateKey::new(5, vec![13], None).unwrap();
        let text = format!("{:?}", key.prepare_public_register());
        assert!(!text.contains("13"));
    }
}
