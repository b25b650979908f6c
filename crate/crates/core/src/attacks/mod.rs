//! Adversary harness. Everything here works only through the operations a
//! real eavesdropper has: rotating, measuring and SWAP-testing registers,
//! and submitting states to the decryption device. No code path reads a
//! register's description.

mod chosen_ciphertext;
mod chosen_plaintext;
mod forward_search;
mod key_recovery;
mod single_use;

pub use chosen_ciphertext::{
    chosen_ciphertext_session, CcaAccounting, CcaSession, OracleTranscript, Submission,
    TranscriptEntry,
};
pub use chosen_plaintext::{
    chosen_plaintext_distinguishability, CpaDistances, CpaEnumerator, CPA_PRECISION_CAP,
    CPA_QUBIT_CAP,
};
pub use forward_search::{
    exact_success_probability, first_alpha_below_random, forward_search_trial, run_forward_search,
    theoretical_success, AttackConfig, AttackReport, DecisionRule, ForwardSearchGuess,
    ENUMERATION_ALPHA_CAP,
};
pub use key_recovery::{key_recovery_baseline, KeyRecoveryReport};
pub use single_use::{
    repeated_swap_stats, single_use_constraint_check, RepeatedSwapStats, SingleUseRecord,
};
