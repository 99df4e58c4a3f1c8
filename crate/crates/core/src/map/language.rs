use std::collections::{BTreeSet, HashMap, HashSet};

use crate::graph::{is_reduced, turns_of, Edge, Language, Path, Turn};
use crate::scc::{is_cyclic, tarjan};

use super::{GraphMap, MapError, TurnTable};

/// Reduced with every crossed turn legal.
pub fn is_legal_path(table: &TurnTable, p: &[Edge]) -> bool {
    is_reduced(p) && turns_of(p).all(|t| table.is_legal(t))
}

/// Every reduced path `c` together with an offset `k` such that `gamma` reads
/// off `f(c)` starting at position `k` of `f(c[0])`, where the first and last
/// edges of `c` both contribute to `gamma`.
pub fn minimal_covers(f: &GraphMap, gamma: &[Edge]) -> Vec<(Path, usize)> {
    let g = f.domain();
    let images: Vec<Path> = g.oriented_edges().map(|e| f.image(e)).collect();
    covers_with(f, &images, &g.stars(), gamma)
}

fn covers_with(
    f: &GraphMap,
    images: &[Path],
    star: &[Vec<Edge>],
    gamma: &[Edge],
) -> Vec<(Path, usize)> {
    let g = f.domain();
    let mut out = Vec::new();
    if gamma.is_empty() {
        return out;
    }
    for x in g.oriented_edges() {
        let img = &images[x.0 as usize];
        for k in 0..img.len() {
            let n = (img.len() - k).min(gamma.len());
            if img[k..k + n] != gamma[..n] {
                continue;
            }
            let mut stack = vec![(vec![x], n)];
            while let Some((c, done)) = stack.pop() {
                if done == gamma.len() {
                    out.push((c, k));
                    continue;
                }
                let last = *c.last().unwrap();
                for &y in &star[g.terminal(last).index()] {
                    if y == last.inv() {
                        continue;
                    }
                    let iy = &images[y.0 as usize];
                    let m = iy.len().min(gamma.len() - done);
                    if m > 0 && iy[..m] == gamma[done..done + m] {
                        let mut c2 = c.clone();
                        c2.push(y);
                        stack.push((c2, done + m));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn factors_into(p: &[Edge], max_len: usize, out: &mut BTreeSet<Path>) {
    for l in 1..=max_len.min(p.len()) {
        for w in p.windows(l) {
            out.insert(w.to_vec());
        }
    }
}

/// Subpaths of length at most `max_len` of the iterates `f^t(e)`, `t >= 1`,
/// together with their reversals.
pub fn used_language(f: &GraphMap, max_len: usize) -> Result<Language, MapError> {
    f.require_train_track()?;
    let g = f.domain();
    let mut base = BTreeSet::new();
    for e in g.oriented_edges() {
        factors_into(&f.image(e), max_len, &mut base);
    }
    // A window of f(w) of length at most L lies inside f(u) for a subpath u
    // of w of length at most L, so the accumulated set A satisfies
    // A_{t+1} = F_1 ∪ f(A_t) and stabilizes.
    let mut acc = base.clone();
    loop {
        let mut next = base.clone();
        for u in &acc {
            factors_into(&f.image_of_path(u), max_len, &mut next);
        }
        if next.len() == acc.len() {
            break;
        }
        acc = next;
    }
    let mut lang = Language::new(max_len);
    lang.paths = acc;
    lang.add_reversals();
    Ok(lang)
}

/// Legal paths `gamma` of length at most `max_len` such that for every `t`
/// some legal path has `gamma` as a subpath of its `f^t`-image.
///
/// Such paths are exactly those with an infinite chain of legal minimal
/// covers; covers never get longer, so the chains live in a finite graph and
/// the question is whether a cycle is reachable. Every path on such a chain
/// and every subpath of such a path is again infinitely legal, so the search
/// grows one length at a time from the paths already accepted.
pub fn infinitely_legal_language(f: &GraphMap, max_len: usize) -> Result<Language, MapError> {
    f.require_train_track()?;
    let table = TurnTable::new(f)?;
    let g = f.domain();
    let star = g.stars();
    let images: Vec<Path> = g.oriented_edges().map(|e| f.image(e)).collect();

    let mut good: HashSet<Path> = HashSet::new();
    let mut prev: Vec<Path> = Vec::new();
    for len in 1..=max_len {
        let mut cands: Vec<Path> = if len == 1 {
            g.oriented_edges().map(|e| vec![e]).collect()
        } else {
            let mut v = Vec::new();
            for p in &prev {
                let last = *p.last().unwrap();
                for &y in &star[g.terminal(last).index()] {
                    if y == last.inv() || !table.is_legal(Turn::crossed(last, y)) {
                        continue;
                    }
                    let mut q = p.clone();
                    q.push(y);
                    if good.contains(&q[1..]) {
                        v.push(q);
                    }
                }
            }
            v
        };
        cands.sort();
        let id: HashMap<&Path, usize> = cands.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(cands.len());
        let mut reaches = vec![false; cands.len()];
        for (i, p) in cands.iter().enumerate() {
            let mut next = Vec::new();
            for (c, _) in covers_with(f, &images, &star, p) {
                if c.len() < len {
                    reaches[i] |= good.contains(&c);
                } else if let Some(&j) = id.get(&c) {
                    next.push(j);
                }
            }
            next.sort_unstable();
            next.dedup();
            adj.push(next);
        }
        let mut ok = vec![false; cands.len()];
        for comp in tarjan(&adj) {
            let hit = is_cyclic(&adj, &comp)
                || comp
                    .iter()
                    .any(|&v| reaches[v] || adj[v].iter().any(|&w| ok[w]));
            for v in comp {
                ok[v] = hit;
            }
        }
        prev = cands
            .into_iter()
            .zip(ok)
            .filter(|(_, k)| *k)
            .map(|(p, _)| p)
            .collect();
        if prev.is_empty() {
            break;
        }
        good.extend(prev.iter().cloned());
    }
    let mut lang = Language::new(max_len);
    for p in good {
        lang.insert(p);
    }
    Ok(lang)
}
