use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::cfg::Cfg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Loop {
    pub header: usize,
    pub body: BTreeSet<usize>,
    /// Instructions across the body blocks.
    pub size: usize,
    pub back_edges: usize,
}

/// Natural loops, one per header (back edges sharing a header merge).
/// Unreachable blocks take no part.
pub fn detect_loops(cfg: &Cfg) -> Vec<Loop> {
    let idom = cfg.immediate_dominators();
    let mut by_header: BTreeMap<usize, (BTreeSet<usize>, usize)> = BTreeMap::new();
    for (t, h) in cfg.edges() {
        if idom[t].is_none() || !Cfg::dominates(&idom, h, t) {
            continue;
        }
        let (body, count) = by_header.entry(h).or_insert_with(|| (BTreeSet::from([h]), 0));
        *count += 1;
        let mut stack = vec![t];
        while let Some(n) = stack.pop() {
            if body.insert(n) {
                stack.extend(
                    cfg.blocks[n]
                        .predecessors
                        .iter()
                        .copied()
                        .filter(|&p| idom[p].is_some()),
                );
            }
        }
    }
    by_header
        .into_iter()
        .map(|(header, (body, back_edges))| Loop {
            header,
            size: body.iter().map(|&b| cfg.blocks[b].len()).sum(),
            body,
            back_edges,
        })
        .collect()
}

/// Loop nesting depth for each loop (1 = outermost).
pub fn nesting_depths(loops: &[Loop]) -> Vec<usize> {
    loops
        .iter()
        .map(|l| {
            1 + loops
                .iter()
                .filter(|o| o.header != l.header && o.body.is_superset(&l.body) && o.body.len() > l.body.len())
                .count()
        })
        .collect()
}

/// Loops that contain no other loop.
pub fn innermost(loops: &[Loop]) -> usize {
    loops
        .iter()
        .filter(|l| {
            !loops
                .iter()
                .any(|o| o.header != l.header && l.body.contains(&o.header) && l.body.is_superset(&o.body))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::cfg::build_cfg;
    use crate::features::cfg::tests::{function, DIAMOND};

    #[test]
    fn diamond_has_no_loop() {
        assert!(detect_loops(&build_cfg(&function(DIAMOND))).is_empty());
    }

    #[test]
    fn single_loop() {
        // b0: init; b1: body + cond back edge; b2: ret
        let f = function(
            "    1000:\t31 c0\txor    %eax,%eax
    1002:\t01 f8\tadd    %edi,%eax
    1004:\tff cf\tdec    %edi
    1006:\t75 fa\tjne    1002 <f+0x2>
    1008:\tc3\tret
",
        );
        let cfg = build_cfg(&f);
        let loops = detect_loops(&cfg);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].size, 3);
        assert_eq!(loops[0].body, BTreeSet::from([1]));
    }

    #[test]
    fn nested_loops() {
        let f = function(
            "    1000:\t31 c0\txor    %eax,%eax
    1002:\t89 f1\tmov    %esi,%ecx
    1004:\t01 c8\tadd    %ecx,%eax
    1006:\tff c9\tdec    %ecx
    1008:\t75 fa\tjne    1004 <f+0x4>
    100a:\tff cf\tdec    %edi
    100c:\t75 f4\tjne    1002 <f+0x2>
    100e:\tc3\tret
",
        );
        let loops = detect_loops(&build_cfg(&f));
        assert_eq!(loops.len(), 2);
        let (outer, inner) = (&loops[0], &loops[1]);
        assert!(inner.body.is_subset(&outer.body) && inner.body != outer.body);
        assert_eq!(nesting_depths(&loops), vec![1, 2]);
        assert_eq!(innermost(&loops), 1);
    }
}
