use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::category::{classify, Arch, Category};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub address: u64,
    pub byte_size: u32,
    pub mnemonic: String,
    pub operand_text: String,
    pub explicit_branch_target: Option<u64>,
    /// Symbol named in the branch target annotation, offset removed.
    pub target_symbol: Option<String>,
    /// Target lies outside the enclosing function.
    pub target_is_external: bool,
    pub category: Category,
    pub is_call: bool,
    pub is_return: bool,
    pub is_conditional: bool,
}

impl Instruction {
    pub fn is_jump(&self) -> bool {
        self.category == Category::ControlTransfer
    }

    pub fn is_indirect(&self) -> bool {
        (self.is_call || self.is_jump()) && self.explicit_branch_target.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionListing {
    pub name: String,
    pub start_address: u64,
    pub instructions: Vec<Instruction>,
}

impl FunctionListing {
    /// One past the last instruction byte.
    pub fn end_address(&self) -> u64 {
        self.instructions
            .last()
            .map_or(self.start_address, |i| i.address + u64::from(i.byte_size))
    }

    pub fn contains(&self, address: u64) -> bool {
        (self.start_address..self.end_address()).contains(&address)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Listing {
    pub arch: Arch,
    pub functions: Vec<FunctionListing>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("listing line {line}: {message}")]
pub struct ListingSyntaxError {
    pub line: usize,
    pub message: String,
}

static HEADER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\S+) <(.+)>:\s*$").unwrap());
static INSN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(\S+):\t([0-9a-fA-F]+(?: [0-9a-fA-F]+)*)\s*(?:\t(.*))?$").unwrap());
static FORMAT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"file format (\S+)").unwrap());
static COMMENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+[#@;]\s.*$").unwrap());
static TARGET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:^|[\s,])([0-9a-fA-F]+) <([^>]+)>$").unwrap());

const PREFIXES: [&str; 19] = [
    "rep", "repz", "repe", "repnz", "repne", "lock", "notrack", "bnd", "data16", "data32", "addr32", "cs", "ds", "ss",
    "es", "fs", "gs", "xacquire", "xrelease",
];

fn hex(s: &str) -> Option<u64> {
    u64::from_str_radix(s, 16).ok()
}

fn arch_of(format: &str) -> Arch {
    if format.contains("arm") {
        Arch::Arm32
    } else {
        Arch::X86_64
    }
}

/// Parses an objdump-style disassembly listing. The architecture comes from
/// the `file format` line when present.
pub fn parse_listing(text: &str) -> Result<Listing, ListingSyntaxError> {
    let arch = text
        .lines()
        .take(8)
        .find_map(|l| FORMAT.captures(l).map(|c| arch_of(&c[1])))
        .unwrap_or_default();
    parse_listing_as(text, arch)
}

pub fn parse_listing_as(text: &str, arch: Arch) -> Result<Listing, ListingSyntaxError> {
    let mut listing = Listing {
        arch,
        functions: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ListingSyntaxError { line: line_no, message };
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim() == "..." || line.starts_with("Disassembly of section") {
            continue;
        }
        if let Some(c) = HEADER.captures(line) {
            let start = hex(&c[1]).ok_or_else(|| err(format!("bad function address {:?}", &c[1])))?;
            listing.functions.push(FunctionListing {
                name: c[2].to_string(),
                start_address: start,
                instructions: Vec::new(),
            });
            continue;
        }
        if let Some(c) = INSN.captures(line) {
            let address = hex(&c[1]).ok_or_else(|| err(format!("bad instruction address {:?}", &c[1])))?;
            let bytes: u32 = c[2].split(' ').map(|g| (g.len() / 2) as u32).sum();
            let func = listing
                .functions
                .last_mut()
                .ok_or_else(|| err("instruction before any function header".into()))?;
            let Some(text) = c.get(3).map(|m| m.as_str().trim()).filter(|t| !t.is_empty()) else {
                // continuation of a long encoding
                let prev = func
                    .instructions
                    .last_mut()
                    .ok_or_else(|| err("byte continuation without an instruction".into()))?;
                prev.byte_size += bytes;
                continue;
            };
            if let Some(prev) = func.instructions.last() {
                if address <= prev.address {
                    return Err(err(format!(
                        "address {address:#x} does not increase (previous {:#x})",
                        prev.address
                    )));
                }
            }
            func.instructions.push(instruction(arch, address, bytes, text));
            continue;
        }
        if line.contains(":\t") {
            return Err(err(format!("malformed instruction line {line:?}")));
        }
        if FORMAT.is_match(line) || line.starts_with(char::is_alphanumeric) || line.starts_with('/') {
            // file banner or section noise
            continue;
        }
        return Err(err(format!("unrecognized line {line:?}")));
    }
    for f in &mut listing.functions {
        let range = f.start_address..f.end_address();
        for i in &mut f.instructions {
            if let Some(t) = i.explicit_branch_target {
                i.target_is_external = !range.contains(&t);
            }
        }
    }
    Ok(listing)
}

fn instruction(arch: Arch, address: u64, byte_size: u32, text: &str) -> Instruction {
    let text = COMMENT.replace(text, "");
    let mut words = text.split_whitespace().peekable();
    let mut mnemonic = String::new();
    while let Some(w) = words.next() {
        if !mnemonic.is_empty() {
            mnemonic.push(' ');
        }
        mnemonic.push_str(w);
        let lower = w.to_ascii_lowercase();
        let is_prefix = PREFIXES.contains(&lower.as_str()) || lower.starts_with("rex");
        if !(arch == Arch::X86_64 && is_prefix && words.peek().is_some()) {
            break;
        }
    }
    let operand_text = words.collect::<Vec<_>>().join(" ");
    let class = classify(arch, &mnemonic, &operand_text);
    let branches = matches!(class.category, Category::ControlTransfer | Category::Call);
    let (target, symbol) = match TARGET.captures(&operand_text).filter(|_| branches) {
        Some(c) => {
            let sym = c[2].split('+').next().unwrap_or_default().to_string();
            (hex(&c[1]), Some(sym))
        }
        None => (None, None),
    };
    Instruction {
        address,
        byte_size,
        mnemonic,
        operand_text,
        explicit_branch_target: target,
        target_symbol: symbol,
        target_is_external: false,
        category: class.category,
        is_call: class.category == Category::Call,
        is_return: class.category == Category::Return,
        is_conditional: class.conditional,
    }
}
