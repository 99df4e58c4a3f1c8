//! Shared fixtures and a seeded generator of small random graph maps.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use traintrack::graph::{Edge, Graph, Path, Vertex};
use traintrack::map::GraphMap;
use traintrack::substitution::Substitution;

pub fn rose_map(names: &[&str], images: &[&str]) -> GraphMap {
    let g = Graph::rose(names);
    let imgs = images.iter().map(|s| g.parse_path(s).unwrap()).collect();
    GraphMap::self_map(&g, imgs).unwrap()
}

pub fn fibonacci() -> GraphMap {
    rose_map(&["a", "b"], &["a b", "a"])
}

pub fn thue_morse() -> GraphMap {
    rose_map(&["a", "b"], &["a b", "b a"])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph with at most `max_v` vertices and `max_e` edges, every
/// valence at least two, and not a circle.
pub fn random_graph(r: &mut impl Rng, max_v: usize, max_e: usize) -> Graph {
    loop {
        let nv = r.gen_range(1..=max_v);
        let ne = r.gen_range(nv.max(1)..=max_e.max(nv));
        let mut ends = Vec::new();
        for v in 1..nv {
            ends.push((r.gen_range(0..v), v));
        }
        while ends.len() < ne {
            ends.push((r.gen_range(0..nv), r.gen_range(0..nv)));
        }
        ends.shuffle(r);
        let Ok(g) = Graph::from_ends(nv, &ends) else {
            continue;
        };
        if g.vertices().any(|v| g.valence(v) != 2) {
            return g;
        }
    }
}

fn random_walk(r: &mut impl Rng, g: &Graph, from: Vertex, len: usize) -> Path {
    let mut p: Path = Vec::with_capacity(len);
    let mut at = from;
    for _ in 0..len {
        let choices: Vec<Edge> = g
            .star(at)
            .into_iter()
            .filter(|&e| p.last().is_none_or(|&l| e != l.inv()))
            .collect();
        let Some(&e) = choices.choose(r) else { break };
        p.push(e);
        at = g.terminal(e);
    }
    p
}

/// Random reduced map `g -> h` with non-trivial edge images of length at
/// most `max_img`.
pub fn random_map_between(r: &mut impl Rng, g: &Graph, h: &Graph, max_img: usize) -> GraphMap {
    'outer: for _ in 0..10_000 {
        let mut vimg: Vec<Option<Vertex>> = vec![None; g.vertex_count()];
        let mut images = Vec::new();
        for i in 0..g.edge_count() {
            let (a, b) = g.ends(i);
            let mut found = None;
            for _ in 0..200 {
                let start = vimg[a.index()]
                    .unwrap_or_else(|| Vertex(r.gen_range(0..h.vertex_count()) as u32));
                let len = r.gen_range(1..=max_img);
                let p = random_walk(r, h, start, len);
                if p.len() != len {
                    continue;
                }
                let end = h.terminal(*p.last().unwrap());
                let end_ok = match vimg[b.index()] {
                    Some(w) => w == end,
                    None => a != b || end == start,
                };
                if end_ok {
                    found = Some((start, end, p));
                    break;
                }
            }
            let Some((s, e, p)) = found else {
                continue 'outer;
            };
            vimg[a.index()] = Some(s);
            vimg[b.index()] = Some(e);
            images.push(p);
        }
        let vimg: Vec<Vertex> = vimg
            .into_iter()
            .map(|v| v.unwrap_or_else(|| Vertex(r.gen_range(0..h.vertex_count()) as u32)))
            .collect();
        return GraphMap::new(g.clone(), h.clone(), vimg, images)
            .expect("generator builds valid maps");
    }
    panic!("no reduced map with images of length <= {max_img} found");
}

/// Random reduced self-map on a small random graph: at most 4 vertices,
/// 6 edges, image lengths at most 4.
pub fn random_self_map(r: &mut impl Rng) -> GraphMap {
    let g = random_graph(r, 4, 6);
    random_map_between(r, &g, &g, 4)
}

/// Random expanding substitution on 2 or 3 letters with images of length at
/// most `max_img`.
pub fn random_substitution(r: &mut impl Rng, max_img: usize) -> Substitution {
    let names = ["a", "b", "c"];
    loop {
        let k = r.gen_range(2..=3);
        let images: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                (0..r.gen_range(1..=max_img))
                    .map(|_| r.gen_range(0..k))
                    .collect()
            })
            .collect();
        let alphabet = names[..k].iter().map(|s| s.to_string()).collect();
        let s = Substitution::new(alphabet, images).unwrap();
        if s.is_expanding() {
            return s;
        }
    }
}
