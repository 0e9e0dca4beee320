//! Protocol actors and the locking/unlocking pipeline.

mod correction;
mod locking;
mod parties;
mod pipeline;
mod secret;
mod transcript;

pub use correction::{apply_correction, decode_n5, decode_n6, GateSequence, PairOp};
pub use locking::{
    lock, prepare_joint_state, unlock_bob1, unlock_bob_mid, Bob1Style, LockingVariant,
};
pub use parties::{assign_parties, PartyAssignment};
pub use pipeline::{
    enumerate_paths, enumerate_paths_on_channel, enumerate_protocol_branches, BranchReport,
    Decoder, PathBranch, ProtocolConfig,
};
pub use secret::SecretState;
pub use transcript::ClassicalTranscript;
