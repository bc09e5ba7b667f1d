use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use super::dwarf::scan_file;
use super::elf::{self, SymbolRecord};
use super::{format_ratio, FunctionEntry, GroundTruthError, InlineInstance, Presence, Result};
use crate::par::{self, Execution};

/// Sets `symbol_present` from `symbols` and derives `presence`.
///
/// A function counts as inlined when its DWARF inline constant says so or
/// at least one inlined instance points at it. An inlined function that
/// still has a symbol or an out-of-line body "remains"; otherwise it was
/// eliminated.
pub fn classify_presence(entries: Vec<FunctionEntry>, symbols: &[SymbolRecord]) -> Vec<FunctionEntry> {
    entries
        .into_iter()
        .map(|mut f| {
            f.symbol_present = symbols.iter().any(|s| s.name == f.name);
            let inlined = f.inline_attr.says_inlined() || f.inline_instance_count > 0;
            f.presence = if !inlined {
                Presence::NeverInlined
            } else if f.symbol_present || f.has_concrete_range {
                Presence::InlinedRemaining
            } else {
                Presence::InlinedEliminated
            };
            f
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub functions: u64,
    pub inlined: u64,
    pub remaining: u64,
    pub eliminated: u64,
}

impl Totals {
    pub fn of(entries: &[FunctionEntry]) -> Self {
        let mut t = Totals {
            functions: entries.len() as u64,
            ..Default::default()
        };
        for f in entries {
            match f.presence {
                Presence::NeverInlined => {}
                Presence::InlinedRemaining => t.remaining += 1,
                Presence::InlinedEliminated => t.eliminated += 1,
            }
        }
        t.inlined = t.remaining + t.eliminated;
        t
    }

    /// Exact `inlined / functions`; `None` for an empty universe.
    pub fn ratio(&self) -> Option<f64> {
        (self.functions > 0).then(|| self.inlined as f64 / self.functions as f64)
    }
}

/// Per-binary inlining summary.
#[derive(Clone, Debug, PartialEq)]
pub struct InliningReport {
    pub binary_id: String,
    pub total_functions: u64,
    pub inlined_functions: u64,
    pub remaining_inlined: u64,
    pub eliminated_inlined: u64,
    /// Unrounded; only the serialized form is cut to four decimals.
    pub inlining_ratio: f64,
    pub entries: Vec<FunctionEntry>,
    pub instances: Vec<InlineInstance>,
    pub warnings: Vec<String>,
}

impl InliningReport {
    /// Builds a report from already-classified entries.
    pub fn from_parts(
        binary_id: impl Into<String>,
        entries: Vec<FunctionEntry>,
        instances: Vec<InlineInstance>,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let totals = Totals::of(&entries);
        let ratio = totals.ratio().ok_or(GroundTruthError::EmptyFunctionUniverse)?;
        Ok(InliningReport {
            binary_id: binary_id.into(),
            total_functions: totals.functions,
            inlined_functions: totals.inlined,
            remaining_inlined: totals.remaining,
            eliminated_inlined: totals.eliminated,
            inlining_ratio: ratio,
            entries,
            instances,
            warnings,
        })
    }

    pub fn totals(&self) -> Totals {
        Totals {
            functions: self.total_functions,
            inlined: self.inlined_functions,
            remaining: self.remaining_inlined,
            eliminated: self.eliminated_inlined,
        }
    }

    pub fn entry(&self, name: &str) -> Option<&FunctionEntry> {
        self.entries
            .binary_search_by(|f| f.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Serialize)]
struct TotalsOut {
    functions: u64,
    inlined: u64,
    remaining: u64,
    eliminated: u64,
    ratio: Box<RawValue>,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    binary_id: &'a str,
    totals: TotalsOut,
    entries: &'a [FunctionEntry],
    instances: &'a [InlineInstance],
    warnings: &'a [String],
}

impl Serialize for InliningReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let ratio = RawValue::from_string(format_ratio(self.inlining_ratio)).map_err(serde::ser::Error::custom)?;
        ReportOut {
            binary_id: &self.binary_id,
            totals: TotalsOut {
                functions: self.total_functions,
                inlined: self.inlined_functions,
                remaining: self.remaining_inlined,
                eliminated: self.eliminated_inlined,
                ratio,
            },
            entries: &self.entries,
            instances: &self.instances,
            warnings: &self.warnings,
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
struct ReportIn {
    binary_id: String,
    entries: Vec<FunctionEntry>,
    #[serde(default)]
    instances: Vec<InlineInstance>,
    #[serde(default)]
    warnings: Vec<String>,
}

impl<'de> Deserialize<'de> for InliningReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ReportIn::deserialize(deserializer)?;
        InliningReport::from_parts(raw.binary_id, raw.entries, raw.instances, raw.warnings)
            .map_err(serde::de::Error::custom)
    }
}

/// `label#sha256:<digest>`.
pub fn binary_id(label: &str, bytes: &[u8]) -> String {
    format!("{label}#sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Extracts, classifies, and totals one binary. `label` names the binary in
/// `binary_id` (usually its path as given by the caller).
pub fn compute_inlining_report(binary_image: &[u8], label: &str) -> Result<InliningReport> {
    let file = elf::parse(binary_image)?;
    let symbols = elf::symbols_of(&file);
    let scan = scan_file(&file)?;
    let entries = classify_presence(scan.functions.into_values().collect(), &symbols);
    InliningReport::from_parts(binary_id(label, binary_image), entries, scan.instances, scan.warnings)
}

/// Reads and reports several binaries, preserving input order.
pub fn reports_for_paths<P: AsRef<Path> + Sync>(
    paths: &[P],
    exec: Execution,
) -> Vec<std::result::Result<InliningReport, String>> {
    par::map(exec, paths, |p| {
        let p = p.as_ref();
        let bytes = std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()))?;
        compute_inlining_report(&bytes, &p.display().to_string()).map_err(|e| format!("{}: {e}", p.display()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_truth::InlineAttr;

    fn entry(name: &str, attr: InlineAttr, concrete: bool, instances: u64) -> FunctionEntry {
        FunctionEntry {
            name: name.into(),
            inline_attr: attr,
            has_concrete_range: concrete,
            inline_instance_count: instances,
            ..Default::default()
        }
    }

    fn sym(name: &str) -> SymbolRecord {
        SymbolRecord {
            name: name.into(),
            address: 0x1000,
            size: 4,
        }
    }

    #[test]
    fn classification_cases() {
        let out = classify_presence(
            vec![
                entry("helper", InlineAttr::Inlined, false, 1),
                entry("util", InlineAttr::Inlined, false, 1),
                entry("worker", InlineAttr::NotInlined, true, 0),
                entry("hinted", InlineAttr::DeclaredNotInlined, false, 2),
            ],
            &[sym("util"), sym("worker")],
        );
        assert_eq!(out[0].presence, Presence::InlinedEliminated);
        assert_eq!(out[1].presence, Presence::InlinedRemaining);
        assert!(out[1].symbol_present);
        assert_eq!(out[2].presence, Presence::NeverInlined);
        // instance evidence wins over a not-inlined constant
        assert_eq!(out[3].presence, Presence::InlinedEliminated);
    }

    fn synthetic(total: u64, remaining: u64, eliminated: u64) -> Vec<FunctionEntry> {
        (0..total)
            .map(|i| {
                let presence = if i < remaining {
                    Presence::InlinedRemaining
                } else if i < remaining + eliminated {
                    Presence::InlinedEliminated
                } else {
                    Presence::NeverInlined
                };
                FunctionEntry {
                    name: format!("f{i:05}"),
                    presence,
                    ..Default::default()
                }
            })
            .collect()
    }

    #[test]
    fn coreutils_scale_ratio() {
        let r = InliningReport::from_parts("x", synthetic(2070, 186, 997), vec![], vec![]).unwrap();
        assert_eq!(r.inlined_functions, 1183);
        assert_eq!(r.remaining_inlined, 186);
        assert_eq!(format_ratio(r.inlining_ratio), "0.5715");
        assert!(r.to_json().contains("\"ratio\": 0.5715"));
    }

    #[test]
    fn zero_inlined_and_empty_universe() {
        let r = InliningReport::from_parts("x", synthetic(10, 0, 0), vec![], vec![]).unwrap();
        assert_eq!(r.inlining_ratio, 0.0);
        assert!(r.to_json().contains("\"ratio\": 0.0000"));
        assert!(matches!(
            InliningReport::from_parts("x", vec![], vec![], vec![]),
            Err(GroundTruthError::EmptyFunctionUniverse)
        ));
    }

    #[test]
    fn json_round_trip() {
        let r = InliningReport::from_parts("x", synthetic(5, 1, 2), vec![], vec!["w".into()]).unwrap();
        let back = InliningReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
