//! Explicit edge-colored graphs: SCC decomposition and Emerson-Lei lasso
//! search.  Shared by emptiness, inclusion and strategy certification.

use std::collections::VecDeque;

use crate::automaton::{ColorId, Conjunct};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Edge {
    pub source: usize,
    pub target: usize,
    pub color: ColorId,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ColorGraph {
    pub edges: Vec<Edge>,
    pub out: Vec<Vec<usize>>,
}

/// A lasso as edge indices: `prefix` leads from an initial node to the
/// first node of `cycle`, which returns to that node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct EdgeLasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl ColorGraph {
    pub fn new(nodes: usize) -> ColorGraph {
        ColorGraph {
            edges: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.out.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_edge(&mut self, source: usize, target: usize, color: ColorId) -> usize {
        self.edges.push(Edge {
            source,
            target,
            color,
        });
        self.out[source].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    /// Nodes reachable from `initial`.
    pub fn reachable(&self, initial: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        let mut stack = Vec::new();
        for &q in initial {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &e in &self.out[q] {
                let t = self.edges[e].target;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Strongly connected components (Tarjan, iterative) of the subgraph
    /// induced by `node_ok` and `edge_ok`.  Component ids are returned per
    /// node (`usize::MAX` for excluded nodes) together with the count.
    pub fn sccs(&self, node_ok: &[bool], edge_ok: &dyn Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let n = self.num_nodes();
        const NONE: usize = usize::MAX;
        let mut index = vec![NONE; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![NONE; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0;
        let mut count = 0;
        // (node, position in its out list)
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if !node_ok[root] || index[root] != NONE {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out[v].len() {
                    let e = self.out[v][*pos];
                    *pos += 1;
                    if !edge_ok(e) {
                        continue;
                    }
                    let w = self.edges[e].target;
                    if !node_ok[w] {
                        continue;
                    }
                    if index[w] == NONE {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp[w] = count;
                            if w == v {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
        (comp, count)
    }

    /// Breadth-first search from `start` along edges accepted by `edge_ok`
    /// for the shortest nonempty path whose last edge satisfies `goal`.
    pub fn path_to_edge(
        &self,
        start: usize,
        edge_ok: &dyn Fn(usize) -> bool,
        goal: &dyn Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let n = self.num_nodes();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for &e in &self.out[q] {
                if !edge_ok(e) {
                    continue;
                }
                if goal(e) {
                    let mut path = vec![e];
                    let mut cur = q;
                    while let Some(pe) = parent[cur] {
                        path.push(pe);
                        cur = self.edges[pe].source;
                    }
                    path.reverse();
                    return Some(path);
                }
                let t = self.edges[e].target;
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Shortest path (possibly empty) from any initial node to `target`,
    /// together with the initial node it starts from.
    pub fn path_from_initial(&self, initial: &[usize], target: usize) -> Option<(usize, Vec<usize>)> {
        if initial.contains(&target) {
            return Some((target, Vec::new()));
        }
        let n = self.num_nodes();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &q in initial {
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &e in &self.out[q] {
                let t = self.edges[e].target;
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                parent[t] = Some(e);
                if t == target {
                    let mut path = Vec::new();
                    let mut cur = t;
                    while let Some(pe) = parent[cur] {
                        path.push(pe);
                        cur = self.edges[pe].source;
                    }
                    path.reverse();
                    return Some((cur, path));
                }
                queue.push_back(t);
            }
        }
        None
    }

    /// BFS distance from the initial nodes (`usize::MAX` if unreachable).
    fn distances(&self, initial: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        let mut queue = VecDeque::new();
        for &q in initial {
            if dist[q] == usize::MAX {
                dist[q] = 0;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &e in &self.out[q] {
                let t = self.edges[e].target;
                if dist[t] == usize::MAX {
                    dist[t] = dist[q] + 1;
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    /// Finds a reachable lasso whose cycle colors satisfy one of the
    /// disjuncts, if any.  Per disjunct, edges colored with a `Fin` color are
    /// removed and the reachable SCCs are checked against every `Inf` set;
    /// among the satisfying SCCs the one closest to an initial node is used.
    pub fn find_lasso(&self, initial: &[usize], dnf: &[Conjunct]) -> Option<EdgeLasso> {
        let reach = self.reachable(initial);
        let dist = self.distances(initial);
        let mut best: Option<(usize, usize, Vec<bool>, &Conjunct)> = None;
        for conj in dnf {
            let edge_ok = |e: usize| !conj.fin.contains(self.edges[e].color);
            let (comp, count) = self.sccs(&reach, &edge_ok);
            let mut colors = vec![crate::automaton::ColorSet::empty(); count];
            let mut nontrivial = vec![false; count];
            for (i, e) in self.edges.iter().enumerate() {
                if !reach[e.source] || !edge_ok(i) {
                    continue;
                }
                let c = comp[e.source];
                if c != usize::MAX && c == comp[e.target] {
                    nontrivial[c] = true;
                    colors[c].insert(e.color);
                }
            }
            for c in 0..count {
                if !nontrivial[c] || !conj.inf.iter().all(|s| s.intersects(colors[c])) {
                    continue;
                }
                let entry = (0..self.num_nodes())
                    .filter(|&q| comp[q] == c)
                    .min_by_key(|&q| (dist[q], q))
                    .expect("component without nodes");
                if best.as_ref().is_none_or(|b| dist[entry] < b.0) {
                    let members: Vec<bool> = comp.iter().map(|&x| x == c).collect();
                    best = Some((dist[entry], entry, members, conj));
                }
            }
        }
        let (_, entry, members, conj) = best?;
        let inside = |e: usize| {
            let edge = &self.edges[e];
            members[edge.source] && members[edge.target] && !conj.fin.contains(edge.color)
        };
        let (_, prefix) = self.path_from_initial(initial, entry)?;
        let mut cycle = Vec::new();
        let mut cur = entry;
        for set in &conj.inf {
            if cycle.iter().any(|&e: &usize| set.contains(self.edges[e].color)) {
                continue;
            }
            let seg = self.path_to_edge(cur, &inside, &|e| set.contains(self.edges[e].color))?;
            cur = self.edges[*seg.last().unwrap()].target;
            cycle.extend(seg);
        }
        if cycle.is_empty() || cur != entry {
            let seg = self.path_to_edge(cur, &inside, &|e| self.edges[e].target == entry)?;
            cycle.extend(seg);
        }
        Some(EdgeLasso { prefix, cycle })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ColorSet;

    fn conj(inf: &[&[ColorId]], fin: &[ColorId]) -> Conjunct {
        Conjunct {
            inf: inf.iter().map(|s| s.iter().copied().collect()).collect(),
            fin: fin.iter().copied().collect(),
        }
    }

    #[test]
    fn tarjan_on_two_cycles() {
        let mut g = ColorGraph::new(5);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 0, 1);
        g.add_edge(1, 2, 1);
        g.add_edge(2, 3, 1);
        g.add_edge(3, 2, 1);
        g.add_edge(3, 4, 1);
        let (comp, count) = g.sccs(&[true; 5], &|_| true);
        assert_eq!(count, 3);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[2]);
        assert_ne!(comp[4], comp[2]);
    }

    #[test]
    fn lasso_visits_every_inf_set() {
        // 0 -> 1 <-> 2 with colors 1 on 1->2 and 2 on 2->1
        let mut g = ColorGraph::new(3);
        g.add_edge(0, 1, 3);
        g.add_edge(1, 2, 1);
        g.add_edge(2, 1, 2);
        let l = g.find_lasso(&[0], &[conj(&[&[1], &[2]], &[])]).unwrap();
        assert_eq!(l.prefix, vec![0]);
        let colors: ColorSet = l.cycle.iter().map(|&e| g.edges[e].color).collect();
        assert_eq!(colors, [1, 2].into_iter().collect());
        assert_eq!(g.edges[l.cycle[0]].source, g.edges[*l.cycle.last().unwrap()].target);
        assert!(g.find_lasso(&[0], &[conj(&[&[1]], &[2])]).is_none());
        assert!(g.find_lasso(&[0], &[conj(&[&[3]], &[])]).is_none());
    }

    #[test]
    fn fin_only_needs_some_cycle() {
        let mut g = ColorGraph::new(2);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 1, 2);
        let l = g.find_lasso(&[0], &[conj(&[], &[1])]).unwrap();
        assert_eq!((l.prefix.len(), l.cycle.len()), (1, 1));
        assert!(g.find_lasso(&[0], &[conj(&[], &[2])]).is_none());
    }
}
