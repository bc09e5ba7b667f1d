use std::borrow::Cow;

use object::{Object, ObjectSection, ObjectSymbol, SymbolKind};

use super::{GroundTruthError, Result};

/// A defined FUNC symbol from `.symtab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolRecord {
    pub name: String,
    pub address: u64,
    pub size: u64,
}

pub(crate) fn parse(bytes: &[u8]) -> Result<object::File<'_>> {
    match object::FileKind::parse(bytes) {
        Ok(object::FileKind::Elf32 | object::FileKind::Elf64) => {}
        Ok(kind) => return Err(GroundTruthError::MalformedElf(format!("{kind:?} is not ELF"))),
        Err(e) => return Err(GroundTruthError::MalformedElf(e.to_string())),
    }
    object::File::parse(bytes).map_err(|e| GroundTruthError::MalformedElf(e.to_string()))
}

pub(crate) fn section_data<'a>(file: &object::File<'a>, name: &str) -> Result<Cow<'a, [u8]>> {
    match file.section_by_name(name) {
        Some(section) => section
            .uncompressed_data()
            .map_err(|e| GroundTruthError::MalformedElf(format!("section {name}: {e}"))),
        None => Ok(Cow::Borrowed(&[])),
    }
}

/// Defined function symbols from the static symbol table. `.dynsym` is not
/// consulted, so a binary stripped of `.symtab` reports no symbols.
pub fn function_symbols(bytes: &[u8]) -> Result<Vec<SymbolRecord>> {
    let file = parse(bytes)?;
    Ok(symbols_of(&file))
}

pub(crate) fn symbols_of(file: &object::File<'_>) -> Vec<SymbolRecord> {
    let mut out: Vec<SymbolRecord> = file
        .symbols()
        .filter(|s| s.kind() == SymbolKind::Text && !s.is_undefined())
        .filter_map(|s| {
            let name = s.name().ok()?;
            (!name.is_empty()).then(|| SymbolRecord {
                name: name.to_string(),
                address: s.address(),
                size: s.size(),
            })
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name).then(a.address.cmp(&b.address)));
    out.dedup();
    out
}
