use serde::{Deserialize, Serialize};

/// Coarse instruction class. Every mnemonic maps to exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    DataTransfer,
    Arithmetic,
    Logic,
    Shift,
    Compare,
    ControlTransfer,
    Call,
    Return,
    FloatingPoint,
    Vector,
    StringOp,
    Misc,
    Unknown,
}

impl Category {
    pub const ALL: [Category; 13] = [
        Category::DataTransfer,
        Category::Arithmetic,
        Category::Logic,
        Category::Shift,
        Category::Compare,
        Category::ControlTransfer,
        Category::Call,
        Category::Return,
        Category::FloatingPoint,
        Category::Vector,
        Category::StringOp,
        Category::Misc,
        Category::Unknown,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arch {
    #[default]
    X86_64,
    Arm32,
}

/// Finer facts about one instruction, beyond its category.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Class {
    pub category: Category,
    pub conditional: bool,
    pub add_sub: bool,
    pub mul_div: bool,
    pub push_pop: bool,
    pub nop: bool,
    /// Execution never continues to the next instruction (ud2, hlt, udf...).
    pub trap: bool,
}

impl Class {
    fn of(category: Category) -> Self {
        Class {
            category,
            conditional: false,
            add_sub: false,
            mul_div: false,
            push_pop: false,
            nop: false,
            trap: false,
        }
    }
}

/// x86-64 category of a bare mnemonic.
pub fn categorize_instruction(mnemonic: &str) -> Category {
    classify(Arch::X86_64, mnemonic, "").category
}

pub fn classify(arch: Arch, mnemonic: &str, operands: &str) -> Class {
    match arch {
        Arch::X86_64 => x86::classify(mnemonic, operands),
        Arch::Arm32 => arm::classify(mnemonic, operands),
    }
}

mod x86 {
    use super::{Category, Category::*, Class};

    const CC: [&str; 30] = [
        "o", "no", "b", "nae", "c", "nb", "ae", "nc", "z", "e", "nz", "ne", "be", "na", "nbe", "a", "s", "ns", "p",
        "pe", "np", "po", "l", "nge", "nl", "ge", "le", "ng", "nle", "g",
    ];

    const PREFIXES: [&str; 19] = [
        "rep", "repz", "repe", "repnz", "repne", "lock", "notrack", "bnd", "data16", "data32", "addr32", "cs", "ds",
        "ss", "es", "fs", "gs", "xacquire", "xrelease",
    ];

    fn table(m: &str) -> Option<Category> {
        Some(match m {
            "mov" | "movabs" | "movzx" | "movsx" | "movsxd" | "movzbl" | "movzbw" | "movzbq" | "movzwl" | "movzwq"
            | "movsbl" | "movsbw" | "movsbq" | "movswl" | "movswq" | "movslq" | "xchg" | "cmpxchg" | "cmpxchg8b"
            | "cmpxchg16b" | "push" | "pop" | "pushf" | "popf" | "pushfq" | "popfq" | "lahf" | "sahf" | "cbw"
            | "cwde" | "cdqe" | "cwd" | "cdq" | "cqo" | "cbtw" | "cwtl" | "cltq" | "cwtd" | "cltd" | "cqto"
            | "movbe" | "movnti" | "leave" | "enter" | "in" | "out" | "xlat" => DataTransfer,
            "add" | "adc" | "sub" | "sbb" | "inc" | "dec" | "neg" | "mul" | "imul" | "div" | "idiv" | "lea"
            | "xadd" | "adcx" | "adox" | "mulx" => Arithmetic,
            "and" | "or" | "xor" | "not" | "andn" | "bt" | "bts" | "btr" | "btc" | "bsf" | "bsr" | "lzcnt"
            | "tzcnt" | "popcnt" | "bswap" | "blsi" | "blsr" | "blsmsk" | "bextr" | "bzhi" | "pdep" | "pext" => Logic,
            "shl" | "sal" | "shr" | "sar" | "rol" | "ror" | "rcl" | "rcr" | "shld" | "shrd" | "shlx" | "shrx"
            | "sarx" | "rorx" => Shift,
            "cmp" | "test" => Compare,
            "jmp" | "ljmp" | "loop" | "loope" | "loopne" | "loopz" | "loopnz" | "jcxz" | "jecxz" | "jrcxz" => {
                ControlTransfer
            }
            "call" | "lcall" => Call,
            "ret" | "lret" | "iret" | "iretd" | "iretq" | "sysret" | "sysretq" | "sysexit" => Return,
            "movs" | "movsb" | "movsw" | "movsl" | "movsq" | "stos" | "stosb" | "stosw" | "stosl" | "stosd"
            | "stosq" | "lods" | "lodsb" | "lodsw" | "lodsl" | "lodsd" | "lodsq" | "scas" | "scasb" | "scasw"
            | "scasl" | "scasd" | "scasq" | "cmps" | "cmpsb" | "cmpsw" | "cmpsl" | "cmpsq" | "ins" | "insb"
            | "insw" | "insl" | "insd" | "outs" | "outsb" | "outsw" | "outsl" | "outsd" => StringOp,
            "nop" | "hlt" | "int" | "int1" | "int3" | "into" | "ud0" | "ud1" | "ud2" | "cpuid" | "rdtsc" | "rdtscp"
            | "pause" | "lfence" | "mfence" | "sfence" | "syscall" | "sysenter" | "endbr64" | "endbr32" | "clflush"
            | "clflushopt" | "clwb" | "xgetbv" | "rdrand" | "rdseed" | "cld" | "std" | "clc" | "stc" | "cmc"
            | "cli" | "sti" | "prefetcht0" | "prefetcht1" | "prefetcht2" | "prefetchnta" | "prefetchw" | "xbegin"
            | "xend" | "xabort" | "xtest" | "rdpkru" | "wrpkru" | "rdfsbase" | "rdgsbase" | "wrfsbase" | "wrgsbase"
            | "vzeroupper" | "vzeroall" | "ldmxcsr" | "stmxcsr" | "vldmxcsr" | "vstmxcsr" => {
                if m.starts_with("vzero") {
                    Vector
                } else {
                    Misc
                }
            }
            "movss" | "movsd" | "cmpsd" | "cmpss" | "ucomiss" | "ucomisd" | "comiss" | "comisd" | "fwait" | "wait" => {
                FloatingPoint
            }
            "movd" | "movdqa" | "movdqu" | "movntdq" | "movntdqa" | "lddqu" | "maskmovdqu" | "emms" | "movq2dq"
            | "movdq2q" | "movntq" | "aesenc" | "aesenclast" | "aesdec" | "aesdeclast" | "aesimc"
            | "aeskeygenassist" | "pclmulqdq" | "sha1rnds4" | "sha256rnds2" | "sha1msg1" | "sha1msg2"
            | "sha256msg1" | "sha256msg2" | "crc32" => {
                if m == "crc32" {
                    Logic
                } else {
                    Vector
                }
            }
            _ => return None,
        })
    }

    fn family(m: &str) -> Option<Class> {
        if let Some(cc) = m.strip_prefix('j') {
            if CC.contains(&cc) {
                let mut c = Class::of(ControlTransfer);
                c.conditional = true;
                return Some(c);
            }
        }
        if let Some(cc) = m.strip_prefix("cmov") {
            if CC.contains(&cc) {
                return Some(Class::of(DataTransfer));
            }
        }
        if let Some(cc) = m.strip_prefix("set") {
            if CC.contains(&cc) {
                return Some(Class::of(DataTransfer));
            }
        }
        None
    }

    fn simd(m: &str) -> Option<Category> {
        if m.len() < 3 {
            return None;
        }
        if let Some(rest) = m.strip_prefix('v') {
            if rest.len() >= 3 {
                return Some(match simd(rest).or_else(|| table(rest)) {
                    Some(FloatingPoint) => FloatingPoint,
                    _ => Vector,
                });
            }
        }
        if m.starts_with("cvt") {
            return Some(
                if m.contains("ps") || m.contains("pd") || m.contains("dq") || m.contains("pi") {
                    Vector
                } else {
                    FloatingPoint
                },
            );
        }
        if m.starts_with('f') {
            return Some(FloatingPoint);
        }
        if m.ends_with("ps") || m.ends_with("pd") {
            return Some(Vector);
        }
        if m.ends_with("ss") || m.ends_with("sd") {
            return Some(FloatingPoint);
        }
        if m.starts_with('p') && !m.starts_with("push") && !m.starts_with("pop") && !m.starts_with("pause") {
            return Some(Vector);
        }
        None
    }

    /// Returns the canonical mnemonic (suffix stripped when that is what
    /// matched) with its class.
    fn base<'a>(m: &'a str, operands: &str) -> Option<(&'a str, Class)> {
        if m == "movq" && (operands.contains("mm") || operands.contains("MM")) {
            return Some((m, Class::of(Vector)));
        }
        if let Some(cat) = table(m) {
            return Some((m, Class::of(cat)));
        }
        if let Some(c) = family(m) {
            return Some((m, c));
        }
        // AT&T operand-size suffix
        if let Some(stem) = m.strip_suffix(['b', 'w', 'l', 'q']) {
            if let Some(cat) = table(stem) {
                return Some((stem, Class::of(cat)));
            }
            if let Some(c) = family(stem) {
                return Some((stem, c));
            }
        }
        simd(m).map(|cat| (m, Class::of(cat)))
    }

    pub fn classify(mnemonic: &str, operands: &str) -> Class {
        let lower = mnemonic.to_ascii_lowercase();
        let mut words: Vec<&str> = lower.split_whitespace().collect();
        while words.len() > 1 && (PREFIXES.contains(&words[0]) || words[0].starts_with("rex")) {
            words.remove(0);
        }
        let m = words.first().copied().unwrap_or("");
        let Some((canon, mut class)) = base(m, operands) else {
            return Class::of(Unknown);
        };
        class.add_sub = matches!(
            canon,
            "add" | "adc" | "sub" | "sbb" | "inc" | "dec" | "neg" | "xadd" | "adcx" | "adox"
        );
        class.mul_div = matches!(canon, "mul" | "imul" | "div" | "idiv" | "mulx");
        class.push_pop = matches!(canon, "push" | "pop" | "pushf" | "popf" | "pushfq" | "popfq");
        class.nop = canon.starts_with("nop");
        class.trap = matches!(canon, "ud2" | "ud0" | "ud1" | "hlt" | "int3");
        if matches!(
            canon,
            "loop" | "loope" | "loopne" | "loopz" | "loopnz" | "jcxz" | "jecxz" | "jrcxz"
        ) {
            class.conditional = true;
        }
        class
    }
}

mod arm {
    use super::{Category, Category::*, Class};

    const CC: [&str; 17] = [
        "eq", "ne", "cs", "hs", "cc", "lo", "mi", "pl", "vs", "vc", "hi", "ls", "ge", "lt", "gt", "le", "al",
    ];

    fn table(m: &str) -> Option<Category> {
        Some(match m {
            "mov" | "movw" | "movt" | "ldr" | "ldrb" | "ldrh" | "ldrsb" | "ldrsh" | "ldrd" | "ldrex" | "ldrexb"
            | "ldrexh" | "ldrexd" | "ldrt" | "ldrbt" | "str" | "strb" | "strh" | "strd" | "strex" | "strexb"
            | "strexh" | "strexd" | "strt" | "ldm" | "ldmia" | "ldmib" | "ldmda" | "ldmdb" | "ldmfd" | "stm"
            | "stmia" | "stmib" | "stmda" | "stmdb" | "stmfd" | "push" | "pop" | "adr" | "uxtb" | "uxth" | "sxtb"
            | "sxth" | "uxtab" | "uxtah" | "sxtab" | "sxtah" | "vldr" | "vstr" | "vpush" | "vpop" | "vldm" | "vstm"
            | "vldmia" | "vstmia" | "vstmdb" | "pld" | "pli" => DataTransfer,
            "add" | "adc" | "sub" | "sbc" | "rsb" | "rsc" | "mul" | "mla" | "mls" | "umull" | "umlal" | "smull"
            | "smlal" | "sdiv" | "udiv" | "addw" | "subw" | "qadd" | "qsub" | "neg" | "smulbb" | "smlabb" => Arithmetic,
            "and" | "orr" | "eor" | "bic" | "mvn" | "orn" | "clz" | "rbit" | "rev" | "rev16" | "revsh" | "bfc"
            | "bfi" | "ubfx" | "sbfx" => Logic,
            "lsl" | "lsr" | "asr" | "ror" | "rrx" => Shift,
            "cmp" | "cmn" | "tst" | "teq" => Compare,
            "b" | "bx" | "cbz" | "cbnz" | "tbb" | "tbh" => ControlTransfer,
            "bl" | "blx" => Call,
            "nop" | "svc" | "swi" | "bkpt" | "udf" | "dmb" | "dsb" | "isb" | "wfi" | "wfe" | "sev" | "yield"
            | "cpsid" | "cpsie" | "mrs" | "msr" | "mrc" | "mcr" | "vmrs" | "vmsr" | "clrex" => Misc,
            _ => return None,
        })
    }

    fn strip_cc(m: &str) -> Option<&str> {
        let (stem, cc) = m.split_at(m.len().checked_sub(2)?);
        CC.contains(&cc).then_some(stem)
    }

    fn base(m: &str) -> Option<(&str, Category, bool)> {
        if let Some(c) = table(m) {
            return Some((m, c, false));
        }
        // IT blocks: it, itt, ite, ittee...
        if m.starts_with("it") && m[2..].chars().all(|c| c == 't' || c == 'e') {
            return Some((m, Misc, false));
        }
        let mut cands: Vec<(&str, bool)> = Vec::new();
        if let Some(s) = strip_cc(m) {
            cands.push((s, true));
            if let Some(s2) = s.strip_suffix('s') {
                cands.push((s2, true));
            }
        }
        if let Some(s) = m.strip_suffix('s') {
            cands.push((s, false));
            if let Some(s2) = strip_cc(s) {
                cands.push((s2, true));
            }
        }
        cands.into_iter().find_map(|(s, cond)| table(s).map(|c| (s, c, cond)))
    }

    fn returns(m: &str, ops: &str) -> bool {
        let ops = ops.to_ascii_lowercase();
        let tokens: Vec<&str> = ops
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter(|t| !t.is_empty())
            .collect();
        match m {
            "bx" => tokens.first() == Some(&"lr"),
            "pop" | "ldm" | "ldmia" | "ldmfd" => tokens.contains(&"pc"),
            "ldr" | "mov" => tokens.first() == Some(&"pc"),
            _ => false,
        }
    }

    pub fn classify(mnemonic: &str, operands: &str) -> Class {
        let lower = mnemonic.to_ascii_lowercase();
        let no_width = lower.trim_end_matches(".w").trim_end_matches(".n");
        let (stem, dtype) = match no_width.split_once('.') {
            Some((s, t)) => (s, Some(t)),
            None => (no_width, None),
        };
        if let Some(rest) = stem.strip_prefix('v') {
            if table(stem).is_none() && !rest.is_empty() {
                let fp = dtype.is_some_and(|t| t.starts_with('f')) || rest.starts_with("cvt") || dtype.is_none();
                return Class::of(if fp { FloatingPoint } else { Vector });
            }
        }
        let Some((m, cat, cond)) = base(stem) else {
            return Class::of(Unknown);
        };
        let mut class = Class::of(cat);
        if returns(m, operands) {
            class.category = Return;
        }
        class.conditional =
            (cat == ControlTransfer && (cond || matches!(m, "cbz" | "cbnz"))) && class.category != Return;
        class.add_sub = matches!(
            m,
            "add" | "adc" | "sub" | "sbc" | "rsb" | "rsc" | "addw" | "subw" | "neg" | "qadd" | "qsub"
        );
        class.mul_div = matches!(
            m,
            "mul" | "mla" | "mls" | "umull" | "umlal" | "smull" | "smlal" | "sdiv" | "udiv" | "smulbb" | "smlabb"
        );
        class.push_pop = matches!(m, "push" | "pop" | "vpush" | "vpop");
        class.nop = m == "nop";
        class.trap = matches!(m, "udf" | "bkpt");
        class
    }
}
