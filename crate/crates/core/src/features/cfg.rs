use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::category::{classify, Arch};
use super::listing::{FunctionListing, Instruction};

/// Callees that never return; a call to one ends its block.
const NORETURN: [&str; 16] = [
    "abort",
    "exit",
    "_exit",
    "_Exit",
    "quick_exit",
    "__stack_chk_fail",
    "__assert_fail",
    "__assert_rtn",
    "__cxa_throw",
    "__cxa_rethrow",
    "_Unwind_Resume",
    "__fortify_fail",
    "longjmp",
    "siglongjmp",
    "pthread_exit",
    "__chk_fail",
];

pub fn is_noreturn_symbol(name: &str) -> bool {
    let base = name.split('@').next().unwrap_or(name);
    NORETURN.contains(&base)
}

/// A maximal straight-line run of instructions `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicBlock {
    pub start: usize,
    pub end: usize,
    pub successors: Vec<usize>,
    pub predecessors: Vec<usize>,
}

impl BasicBlock {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfg {
    pub blocks: Vec<BasicBlock>,
    /// Intra-function branches whose target is not an instruction boundary.
    pub warnings: Vec<String>,
}

impl Cfg {
    pub fn edge_count(&self) -> usize {
        self.blocks.iter().map(|b| b.successors.len()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.successors.iter().map(move |&s| (i, s)))
    }

    /// Blocks reachable from block 0.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.blocks.len()];
        if self.blocks.is_empty() {
            return seen;
        }
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for &s in &self.blocks[b].successors {
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// Immediate dominators over reachable blocks (`None` when unreachable;
    /// the entry is its own dominator).
    pub fn immediate_dominators(&self) -> Vec<Option<usize>> {
        let n = self.blocks.len();
        let mut idom = vec![None; n];
        if n == 0 {
            return idom;
        }
        // reverse postorder from the entry
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut stack = vec![(0usize, 0usize)];
        visited[0] = true;
        while let Some((b, i)) = stack.pop() {
            if let Some(&s) = self.blocks[b].successors.get(i) {
                stack.push((b, i + 1));
                if !visited[s] {
                    visited[s] = true;
                    stack.push((s, 0));
                }
            } else {
                order.push(b);
            }
        }
        order.reverse();
        let mut rpo = vec![usize::MAX; n];
        for (i, &b) in order.iter().enumerate() {
            rpo[b] = i;
        }
        idom[0] = Some(0);
        let intersect = |idom: &[Option<usize>], mut a: usize, mut b: usize| {
            while a != b {
                while rpo[a] > rpo[b] {
                    a = idom[a].expect("processed");
                }
                while rpo[b] > rpo[a] {
                    b = idom[b].expect("processed");
                }
            }
            a
        };
        let mut changed = true;
        while changed {
            changed = false;
            for &b in order.iter().skip(1) {
                let mut new = None;
                for &p in &self.blocks[b].predecessors {
                    if idom[p].is_none() {
                        continue;
                    }
                    new = Some(match new {
                        None => p,
                        Some(cur) => intersect(&idom, p, cur),
                    });
                }
                if new.is_some() && idom[b] != new {
                    idom[b] = new;
                    changed = true;
                }
            }
        }
        idom
    }

    pub fn dominates(idom: &[Option<usize>], a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match idom[b] {
                Some(p) if p != b => b = p,
                _ => return false,
            }
        }
    }
}

fn ends_block(arch: Arch, i: &Instruction) -> bool {
    i.is_jump() || i.is_return || classify(arch, &i.mnemonic, &i.operand_text).trap || noreturn_call(i)
}

fn noreturn_call(i: &Instruction) -> bool {
    i.is_call && i.target_symbol.as_deref().is_some_and(is_noreturn_symbol)
}

pub fn build_cfg(function: &FunctionListing) -> Cfg {
    build_cfg_for(Arch::X86_64, function)
}

pub fn build_cfg_for(arch: Arch, function: &FunctionListing) -> Cfg {
    let insns = &function.instructions;
    let mut cfg = Cfg::default();
    if insns.is_empty() {
        return cfg;
    }
    let index: HashMap<u64, usize> = insns.iter().enumerate().map(|(i, x)| (x.address, i)).collect();
    let local_target = |i: &Instruction| -> Option<Result<usize, u64>> {
        let t = i.explicit_branch_target?;
        if i.target_is_external || !i.is_jump() {
            return None;
        }
        Some(index.get(&t).copied().ok_or(t))
    };

    let mut leaders = BTreeSet::from([0usize]);
    for (k, i) in insns.iter().enumerate() {
        if let Some(t) = local_target(i) {
            match t {
                Ok(idx) => {
                    leaders.insert(idx);
                }
                Err(addr) => cfg.warnings.push(format!(
                    "{}: branch at {:#x} targets {addr:#x}, which is not an instruction boundary",
                    function.name, i.address
                )),
            }
        }
        if ends_block(arch, i) && k + 1 < insns.len() {
            leaders.insert(k + 1);
        }
    }
    let starts: Vec<usize> = leaders.into_iter().collect();
    let block_of = |idx: usize| starts.partition_point(|&s| s <= idx) - 1;
    for (b, &s) in starts.iter().enumerate() {
        let end = starts.get(b + 1).copied().unwrap_or(insns.len());
        cfg.blocks.push(BasicBlock {
            start: s,
            end,
            successors: Vec::new(),
            predecessors: Vec::new(),
        });
    }
    let nblocks = cfg.blocks.len();
    for b in 0..nblocks {
        let last = &insns[cfg.blocks[b].end - 1];
        let mut succ = BTreeSet::new();
        let falls_through = !(last.is_return
            || (last.is_jump() && !last.is_conditional)
            || classify(arch, &last.mnemonic, &last.operand_text).trap
            || noreturn_call(last));
        if let Some(Ok(t)) = local_target(last) {
            succ.insert(block_of(t));
        }
        if falls_through && b + 1 < nblocks {
            succ.insert(b + 1);
        }
        cfg.blocks[b].successors = succ.into_iter().collect();
    }
    for b in 0..nblocks {
        for s in cfg.blocks[b].successors.clone() {
            cfg.blocks[s].predecessors.push(b);
        }
    }
    cfg
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::features::listing::parse_listing;

    pub fn function(body: &str) -> FunctionListing {
        let text = format!("0000000000001000 <f>:\n{body}");
        parse_listing(&text).unwrap().functions.remove(0)
    }

    pub const DIAMOND: &str = "    1000:\t85 ff\ttest   %edi,%edi
    1002:\t74 04\tje     1008 <f+0x8>
    1004:\t31 c0\txor    %eax,%eax
    1006:\teb 02\tjmp    100a <f+0xa>
    1008:\t89 f8\tmov    %edi,%eax
    100a:\tc3\tret
";

    #[test]
    fn straight_line() {
        let f = function(
            "    1000:\t90\tnop\n    1001:\t90\tnop\n    1002:\t90\tnop\n    1003:\t90\tnop\n    1004:\tc3\tret\n",
        );
        let cfg = build_cfg(&f);
        assert_eq!((cfg.blocks.len(), cfg.edge_count()), (1, 0));
    }

    #[test]
    fn diamond() {
        let cfg = build_cfg(&function(DIAMOND));
        assert_eq!((cfg.blocks.len(), cfg.edge_count()), (4, 4));
        let idom = cfg.immediate_dominators();
        assert_eq!(idom, vec![Some(0), Some(0), Some(0), Some(0)]);
    }

    #[test]
    fn self_loop() {
        let cfg = build_cfg(&function("    1000:\teb fe\tjmp    1000 <f>\n"));
        assert_eq!((cfg.blocks.len(), cfg.edge_count()), (1, 1));
    }

    #[test]
    fn dangling_target_dropped() {
        let cfg = build_cfg(&function(
            "    1000:\t74 01\tje     1003 <f+0x3>\n    1002:\t90\tnop\n    1003:\tc3\tret\n",
        ));
        assert_eq!(cfg.warnings.len(), 0);
        let cfg = build_cfg(&function(
            "    1000:\t74 01\tje     1001 <f+0x1>\n    1002:\t90\tnop\n    1003:\tc3\tret\n",
        ));
        assert_eq!(cfg.warnings.len(), 1);
        assert_eq!(cfg.blocks.len(), 2);
    }

    #[test]
    fn noreturn_call_ends_block() {
        let cfg = build_cfg(&function(
            "    1000:\te8 00 00 00 00\tcall   2000 <abort@plt>\n    1005:\t90\tnop\n    1006:\tc3\tret\n",
        ));
        assert_eq!(cfg.blocks.len(), 2);
        assert_eq!(cfg.edge_count(), 0);
        assert_eq!(cfg.reachable(), vec![true, false]);
    }
}
