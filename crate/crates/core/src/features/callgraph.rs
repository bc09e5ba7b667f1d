use std::collections::{BTreeMap, HashMap};

use super::listing::Listing;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Callee {
    Internal(usize),
    External(String),
    /// Sink shared by every call without an explicit target.
    Indirect,
}

/// Binary-wide call graph over the functions of a listing.
#[derive(Clone, Debug, Default)]
pub struct CallGraph {
    /// Per caller, call-site count per callee.
    pub out: Vec<BTreeMap<Callee, usize>>,
    /// Per callee, call-site count per internal caller.
    pub incoming: Vec<BTreeMap<usize, usize>>,
    pub recursive: Vec<bool>,
}

fn is_stub(name: &str) -> bool {
    name.contains('@')
}

impl CallGraph {
    pub fn build(listing: &Listing) -> Self {
        let n = listing.functions.len();
        let mut by_addr = HashMap::new();
        let mut by_name = HashMap::new();
        for (i, f) in listing.functions.iter().enumerate() {
            if is_stub(&f.name) {
                continue;
            }
            by_addr.entry(f.start_address).or_insert(i);
            by_name.entry(f.name.as_str()).or_insert(i);
        }
        let mut g = CallGraph {
            out: vec![BTreeMap::new(); n],
            incoming: vec![BTreeMap::new(); n],
            recursive: vec![false; n],
        };
        for (i, f) in listing.functions.iter().enumerate() {
            for insn in f.instructions.iter().filter(|x| x.is_call) {
                let callee = match (insn.explicit_branch_target, insn.target_symbol.as_deref()) {
                    (None, _) => Callee::Indirect,
                    (Some(addr), sym) => {
                        let internal = by_addr
                            .get(&addr)
                            .copied()
                            .or_else(|| sym.filter(|s| !is_stub(s)).and_then(|s| by_name.get(s).copied()));
                        match internal {
                            Some(j) => Callee::Internal(j),
                            None => Callee::External(
                                sym.map(|s| s.split('@').next().unwrap_or(s).to_string())
                                    .unwrap_or_else(|| format!("{addr:#x}")),
                            ),
                        }
                    }
                };
                if let Callee::Internal(j) = callee {
                    *g.incoming[j].entry(i).or_default() += 1;
                }
                *g.out[i].entry(callee).or_default() += 1;
            }
        }
        g.recursive = g.on_cycle();
        g
    }

    /// Tarjan's SCC; true for members of a cycle (including self loops).
    fn on_cycle(&self) -> Vec<bool> {
        let n = self.out.len();
        let succ: Vec<Vec<usize>> = self
            .out
            .iter()
            .map(|m| {
                m.keys()
                    .filter_map(|c| match c {
                        Callee::Internal(j) => Some(*j),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut result = vec![false; n];
        let mut next = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut work = vec![(root, 0usize)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut k)) = work.last_mut() {
                if let Some(&w) = succ[v].get(*k) {
                    *k += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc member");
                        on_stack[w] = false;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = members.len() > 1 || succ[v].contains(&v);
                    for m in members {
                        result[m] = cyclic;
                    }
                }
            }
        }
        result
    }
}
