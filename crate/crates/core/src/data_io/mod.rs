//! LIBSVM datasets, train/test splits, trace CSVs and run configuration files.

mod config;
mod csv;
mod libsvm;
mod split;

pub use config::{DatasetSource, RunConfig, CONFIG_KEYS};
pub use csv::{parse_trace_csv, read_trace_csv, trace_csv_string, write_trace_csv, TRACE_HEADER};
pub use libsvm::{
    binarize_labels, parse_libsvm, parse_libsvm_raw, parse_libsvm_str, to_libsvm_string, write_libsvm,
};
pub use split::{split_train_test, subsample};
