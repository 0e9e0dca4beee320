//! Ground-truth machinery: transfer maps, correction-table synthesis,
//! closed-form decoder audits, variant sweeps, and security scans.

mod audit;
mod dictionary;
mod security;
mod sweep;
mod table;
mod transfer;

pub use audit::{audit_decoder, AuditReport, BitConvention, DecoderKind, WorkedExampleAudit};
pub use dictionary::{build_dictionary, DictionaryLevel, GateDictionary};
pub use security::{security_scan, Party, SecurityReport};
pub use sweep::{outcome_distribution, variant_sweep, ConfigResult, Eq7SignCheck, SweepReport};
pub use table::{
    synthesize_table, synthesize_with_escalation, verify_row, CorrectionTable, RowFlag, TableRow,
};
pub use transfer::{
    branch_transfer_map, completeness_defect, transfer_maps, transfer_maps_on_channel, TransferMap,
};
