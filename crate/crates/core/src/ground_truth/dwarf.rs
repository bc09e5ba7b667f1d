use std::collections::BTreeMap;

use gimli::{AttributeValue, DebugInfoOffset, EndianSlice, RunTimeEndian, UnitOffset};
use object::Object;

use super::elf;
use super::{is_artificial_name, FunctionEntry, GroundTruthError, InlineAttr, InlineInstance, Result};

type R<'a> = EndianSlice<'a, RunTimeEndian>;
type Die<'a> = gimli::DebuggingInformationEntry<R<'a>>;

// Bounds the abstract_origin / specification chain.
const MAX_REF_HOPS: usize = 16;

/// Everything one pass over `.debug_info` yields.
#[derive(Clone, Debug, Default)]
pub struct DebugScan {
    /// Merged per-name entries. `presence` and `symbol_present` are filled
    /// in later by classification.
    pub functions: BTreeMap<String, FunctionEntry>,
    pub instances: Vec<InlineInstance>,
    pub warnings: Vec<String>,
}

/// One entry per named subprogram; abstract and concrete DIEs of the same
/// name merge. `symbol_present` reflects `.symtab`; `presence` is left at
/// its default until [`classify_presence`](super::classify_presence) runs.
pub fn extract_functions(binary_image: &[u8]) -> Result<Vec<FunctionEntry>> {
    let file = elf::parse(binary_image)?;
    let symbols = elf::symbols_of(&file);
    let scan = scan_file(&file)?;
    Ok(scan
        .functions
        .into_values()
        .map(|mut f| {
            f.symbol_present = symbols.iter().any(|s| s.name == f.name);
            f
        })
        .collect())
}

/// Every inlined-subroutine entry, in DIE order. Dangling origins are
/// skipped; use [`scan`] to see them as warnings.
pub fn extract_inline_instances(binary_image: &[u8]) -> Result<Vec<InlineInstance>> {
    Ok(scan(binary_image)?.instances)
}

pub fn scan(binary_image: &[u8]) -> Result<DebugScan> {
    let file = elf::parse(binary_image)?;
    scan_file(&file)
}

pub(crate) fn scan_file(file: &object::File<'_>) -> Result<DebugScan> {
    if elf::section_data(file, ".debug_info")?.is_empty() {
        return Err(GroundTruthError::MissingDebugInfo);
    }
    let endian = if file.is_little_endian() {
        RunTimeEndian::Little
    } else {
        RunTimeEndian::Big
    };
    let sections = gimli::DwarfSections::load(|id| elf::section_data(file, id.name()))?;
    let dwarf = sections.borrow(|section| EndianSlice::new(section, endian));
    let resolver = Resolver::load(&dwarf)?;
    let mut scan = DebugScan::default();
    for index in 0..resolver.units.len() {
        resolver.walk_unit(index, &mut scan)?;
    }
    for f in scan.functions.values_mut() {
        f.artificial = is_artificial_name(&f.name);
    }
    Ok(scan)
}

fn malformed(offset: u64, err: impl std::fmt::Display) -> GroundTruthError {
    GroundTruthError::MalformedDwarf {
        offset,
        message: err.to_string(),
    }
}

/// What the origin chain of a subprogram DIE tells us.
#[derive(Default)]
struct Description {
    name: Option<String>,
    inline_attr: Option<InlineAttr>,
    decl_file: Option<String>,
}

struct Resolver<'d, 'a> {
    dwarf: &'d gimli::Dwarf<R<'a>>,
    units: Vec<gimli::Unit<R<'a>>>,
    starts: Vec<usize>,
}

impl<'d, 'a> Resolver<'d, 'a> {
    fn load(dwarf: &'d gimli::Dwarf<R<'a>>) -> Result<Self> {
        let mut units = Vec::new();
        let mut starts = Vec::new();
        let mut headers = dwarf.units();
        let mut last = 0u64;
        loop {
            let header = match headers.next() {
                Ok(Some(h)) => h,
                Ok(None) => break,
                Err(e) => return Err(malformed(last, e)),
            };
            let start = header.debug_info_offset().map(|o| o.0).unwrap_or(0);
            last = start as u64;
            let unit = dwarf.unit(header).map_err(|e| malformed(last, e))?;
            starts.push(start);
            units.push(unit);
        }
        Ok(Resolver { dwarf, units, starts })
    }

    fn section_offset(&self, unit: usize, offset: UnitOffset) -> u64 {
        offset
            .to_debug_info_offset(&self.units[unit].header)
            .map_or(0, |o| o.0 as u64)
    }

    fn walk_unit(&self, index: usize, scan: &mut DebugScan) -> Result<()> {
        let unit = &self.units[index];
        let mut cursor = unit.entries();
        // Enclosing concrete subprograms: (depth, name).
        let mut hosts: Vec<(isize, Option<String>)> = Vec::new();
        loop {
            let entry = match cursor.next_dfs() {
                Ok(Some(entry)) => entry,
                Ok(None) => break,
                Err(e) => return Err(malformed(self.starts[index] as u64, e)),
            };
            let depth = entry.depth();
            while hosts.last().is_some_and(|(d, _)| *d >= depth) {
                hosts.pop();
            }
            match entry.tag() {
                gimli::DW_TAG_subprogram => {
                    let concrete = entry.attr_value(gimli::DW_AT_low_pc).is_some()
                        || entry.attr_value(gimli::DW_AT_ranges).is_some();
                    let declaration = matches!(
                        entry.attr_value(gimli::DW_AT_declaration),
                        Some(AttributeValue::Flag(true))
                    );
                    let desc = self.describe(index, entry, &mut scan.warnings);
                    if let Some(name) = &desc.name {
                        if concrete || !declaration {
                            let f = scan.functions.entry(name.clone()).or_insert_with(|| FunctionEntry {
                                name: name.clone(),
                                ..Default::default()
                            });
                            if let Some(attr) = desc.inline_attr {
                                f.inline_attr = f.inline_attr.merge(attr);
                            }
                            f.has_concrete_range |= concrete;
                            if f.decl_file.is_none() {
                                f.decl_file = desc.decl_file.clone();
                            }
                        }
                    }
                    if concrete {
                        hosts.push((depth, desc.name));
                    }
                }
                gimli::DW_TAG_inlined_subroutine => {
                    let offset = self.section_offset(index, entry.offset());
                    if let Some(instance) = self.inline_instance(index, entry, &hosts, scan)? {
                        scan.instances.push(instance);
                    } else {
                        scan.warnings
                            .push(format!("dangling abstract origin in inlined subroutine at {offset:#x}"));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn inline_instance(
        &self,
        index: usize,
        entry: &Die<'a>,
        hosts: &[(isize, Option<String>)],
        scan: &mut DebugScan,
    ) -> Result<Option<InlineInstance>> {
        let unit = &self.units[index];
        let Some(origin) = entry.attr_value(gimli::DW_AT_abstract_origin) else {
            return Ok(None);
        };
        let Some((origin_unit, origin_die)) = self.resolve_ref(index, origin) else {
            return Ok(None);
        };
        let desc = self.describe(origin_unit, &origin_die, &mut scan.warnings);
        let Some(name) = desc.name else {
            return Ok(None);
        };

        let offset = self.section_offset(index, entry.offset());
        let mut pc_ranges = Vec::new();
        let mut ranges = self.dwarf.die_ranges(unit, entry).map_err(|e| malformed(offset, e))?;
        while let Some(r) = ranges.next().map_err(|e| malformed(offset, e))? {
            if r.begin < r.end {
                pc_ranges.push((r.begin, r.end));
            }
        }

        let call_file = entry
            .attr_value(gimli::DW_AT_call_file)
            .and_then(|v| file_index(&v))
            .and_then(|i| self.file_name(index, i));
        let call_line = entry.attr_value(gimli::DW_AT_call_line).and_then(|v| v.udata_value());
        let call_column = entry.attr_value(gimli::DW_AT_call_column).and_then(|v| v.udata_value());

        let f = scan.functions.entry(name.clone()).or_insert_with(|| FunctionEntry {
            name: name.clone(),
            ..Default::default()
        });
        if let Some(attr) = desc.inline_attr {
            f.inline_attr = f.inline_attr.merge(attr);
        }
        if f.decl_file.is_none() {
            f.decl_file = desc.decl_file;
        }
        f.inline_instance_count += 1;

        Ok(Some(InlineInstance {
            abstract_origin: name,
            host_function: hosts.last().and_then(|(_, n)| n.clone()),
            call_file,
            call_line: call_line.filter(|&l| l > 0),
            call_column: call_column.filter(|&c| c > 0),
            pc_ranges,
        }))
    }

    /// Follows abstract_origin / specification links collecting the first
    /// name (linkage name preferred), inline constant, and decl file seen.
    fn describe(&self, index: usize, entry: &Die<'a>, warnings: &mut Vec<String>) -> Description {
        let mut desc = Description::default();
        let mut current = (index, entry.clone());
        for _ in 0..MAX_REF_HOPS {
            let (ui, die) = &current;
            if desc.name.is_none() {
                desc.name = [
                    gimli::DW_AT_linkage_name,
                    gimli::DW_AT_MIPS_linkage_name,
                    gimli::DW_AT_name,
                ]
                .into_iter()
                .find_map(|at| die.attr_value(at))
                .and_then(|v| self.string(*ui, v));
            }
            if desc.inline_attr.is_none() {
                if let Some(value) = die.attr_value(gimli::DW_AT_inline) {
                    let raw = match value {
                        AttributeValue::Inline(inl) => Some(u64::from(inl.0)),
                        other => other.udata_value(),
                    };
                    match raw.and_then(InlineAttr::from_constant) {
                        Some(attr) => desc.inline_attr = Some(attr),
                        None => warnings.push(format!(
                            "unknown DW_AT_inline value {raw:?} at {:#x}",
                            self.section_offset(*ui, die.offset())
                        )),
                    }
                }
            }
            if desc.decl_file.is_none() {
                desc.decl_file = die
                    .attr_value(gimli::DW_AT_decl_file)
                    .and_then(|v| file_index(&v))
                    .and_then(|i| self.file_name(*ui, i));
            }
            let next = die
                .attr_value(gimli::DW_AT_abstract_origin)
                .or_else(|| die.attr_value(gimli::DW_AT_specification));
            match next.and_then(|v| self.resolve_ref(*ui, v)) {
                Some(n) => current = n,
                None => break,
            }
        }
        desc
    }

    fn resolve_ref(&self, index: usize, value: AttributeValue<R<'a>>) -> Option<(usize, Die<'a>)> {
        match value {
            AttributeValue::UnitRef(offset) => {
                let die = self.units[index].entry(offset).ok()?;
                Some((index, die))
            }
            AttributeValue::DebugInfoRef(offset) => self.lookup(offset),
            _ => None,
        }
    }

    fn lookup(&self, offset: DebugInfoOffset<usize>) -> Option<(usize, Die<'a>)> {
        let pos = self.starts.partition_point(|&s| s <= offset.0);
        let index = pos.checked_sub(1)?;
        let unit = &self.units[index];
        let unit_offset = offset.to_unit_offset(&unit.header)?;
        let die = unit.entry(unit_offset).ok()?;
        Some((index, die))
    }

    fn string(&self, index: usize, value: AttributeValue<R<'a>>) -> Option<String> {
        self.dwarf
            .attr_string(&self.units[index], value)
            .ok()
            .map(|s| s.to_string_lossy().into_owned())
    }

    fn file_name(&self, index: usize, file: u64) -> Option<String> {
        let unit = &self.units[index];
        let header = unit.line_program.as_ref()?.header();
        let entry = header.file(file)?;
        let path = self.string(index, entry.path_name())?;
        if entry.directory_index() == 0 || path.starts_with('/') {
            return Some(path);
        }
        match entry.directory(header).and_then(|d| self.string(index, d)) {
            Some(dir) if !dir.is_empty() => Some(format!("{dir}/{path}")),
            _ => Some(path),
        }
    }
}

fn file_index(value: &AttributeValue<R<'_>>) -> Option<u64> {
    match value {
        AttributeValue::FileIndex(i) => Some(*i),
        other => other.udata_value(),
    }
}
