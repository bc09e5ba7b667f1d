//! Static features of disassembled functions: instruction categories,
//! control-flow graph and loop shape, and call-graph degree.
//!
//! Input is a plain-text listing in `objdump -d -w` layout. Every function
//! gets a fixed-length vector whose slot meanings come from a versioned
//! [`FeatureRegistry`].

mod callgraph;
pub mod category;
pub mod cfg;
mod extract;
pub mod listing;
pub mod loops;
pub mod registry;

use std::fmt::Write as _;

pub use callgraph::{CallGraph, Callee};
pub use category::{categorize_instruction, classify, Arch, Category};
pub use extract::{aggregate, extract_features, Aggregate, FeatureSet, FeatureVector};
pub use listing::{parse_listing, parse_listing_as, FunctionListing, Instruction, Listing, ListingSyntaxError};
pub use registry::{FeatureRegistry, SlotDef, REGISTRY_VERSION, SLOT_COUNT};

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error(transparent)]
    Listing(#[from] ListingSyntaxError),
    #[error("unknown feature registry version '{0}'")]
    UnknownRegistryVersion(String),
}

/// Row name used for the whole-binary aggregate in CSV output.
pub const BINARY_ROW: &str = "__binary__";

fn cell(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.6}")
    }
}

impl FeatureSet {
    /// `function,f1,...,f62` with one row per function and a final
    /// `__binary__` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function");
        for i in 1..=SLOT_COUNT {
            let _ = write!(out, ",f{i}");
        }
        out.push('\n');
        let rows = self
            .functions
            .iter()
            .map(|(n, v)| (n.as_str(), v))
            .chain(std::iter::once((BINARY_ROW, &self.aggregate)));
        for (name, v) in rows {
            out.push_str(&csv_field(name));
            for x in &v.values {
                out.push(',');
                out.push_str(&cell(*x));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Parses a listing and extracts features with the named registry.
pub fn features_from_text(text: &str, version: &str, exec: crate::Execution) -> Result<FeatureSet, FeatureError> {
    let registry = FeatureRegistry::load(version)?;
    let listing = parse_listing(text)?;
    Ok(extract_features(&listing, &registry, exec))
}
