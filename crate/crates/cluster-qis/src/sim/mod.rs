//! Dense statevector engine with 1-based, most-significant-first qubit labels.

mod density;
mod gate;
mod measure;
mod state;

pub use density::{reduced_density_matrix, trace_distance, DensityMatrix};
pub use gate::{apply_gate, GateName, GateSpec};
pub use measure::{enumerate_measurement_branches, MeasurementBranch};
pub use state::{equal_up_to_global_phase, pure_fidelity, tensor_product, StateVector};
