//! Multitape Turing machines with advice, block-respecting analysis,
//! computation graphs and summaries, and the Tensor_k machine.

pub mod graph;
pub mod log_star;
pub mod machine;
pub mod run;
pub mod segment;
pub mod summary;
pub mod tensor;

pub use graph::{computation_graph, greedy_separator, predecessor_profile, ComputationGraph, PredecessorProfile, SeparatorReport};
pub use log_star::log_star;
pub use machine::{MachineBuilder, MachineSpec, Move, Rule};
pub use run::{run, run_partial, run_untraced, RunResult, RunTrace, WriteEvent};
pub use segment::{block_of, is_block_respecting, segment, SegmentedTrace, Violation};
pub use summary::{summary_extract, ComputationSummary, Transcription};
pub use tensor::{
    decode_tensor_input, encode_tensor_input, gen_tensor_k_machine, tensor_input_len, tensor_k_reference,
    TensorMachine, DEFAULT_TENSOR_K_CAP,
};
