use std::collections::HashMap;

use crate::graph::{Edge, Turn};

use super::{GraphMap, MapError};

/// Orbits of turns under the direction map of a self-map.
#[derive(Clone, Debug)]
pub struct TurnTable {
    df: Vec<Edge>,
    legal: HashMap<Turn, bool>,
}

/// The sequence `T, Df(T), Df²(T), ...` with `turns[preperiod + period]`
/// equal to `turns[preperiod]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub turns: Vec<Turn>,
    pub preperiod: usize,
    pub period: usize,
}

impl Orbit {
    /// The `k`-th turn of the orbit.
    pub fn at(&self, k: usize) -> Turn {
        if k < self.turns.len() {
            self.turns[k]
        } else {
            self.turns[self.preperiod + (k - self.preperiod) % self.period]
        }
    }
}

impl TurnTable {
    pub fn new(f: &GraphMap) -> Result<TurnTable, MapError> {
        if !f.is_self_map() {
            return Err(MapError::NotSelfMap);
        }
        let g = f.domain();
        let mut df = Vec::with_capacity(2 * g.edge_count());
        for e in g.oriented_edges() {
            match f.direction(e) {
                Some(d) => df.push(d),
                None => return Err(MapError::Contracted(g.edge_name(e.index()).to_string())),
            }
        }
        let mut t = TurnTable {
            df,
            legal: HashMap::new(),
        };
        for dirs in g.stars() {
            for (i, &a) in dirs.iter().enumerate() {
                for &b in &dirs[i..] {
                    let turn = Turn::new(a, b);
                    if !t.legal.contains_key(&turn) {
                        let o = t.orbit(turn);
                        let legal = !o.turns.iter().any(|x| x.is_degenerate());
                        for x in o.turns {
                            t.legal.entry(x).or_insert(legal);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn df(&self, e: Edge) -> Edge {
        self.df[e.0 as usize]
    }

    pub fn df_turn(&self, t: Turn) -> Turn {
        t.map(|e| self.df(e))
    }

    pub fn orbit(&self, t: Turn) -> Orbit {
        let mut turns = vec![t];
        let mut index = HashMap::from([(t, 0usize)]);
        loop {
            let next = self.df_turn(*turns.last().unwrap());
            if let Some(&i) = index.get(&next) {
                let period = turns.len() - i;
                return Orbit {
                    turns,
                    preperiod: i,
                    period,
                };
            }
            index.insert(next, turns.len());
            turns.push(next);
        }
    }

    /// First `k` with `Df^k(t)` degenerate, if any.
    pub fn degeneration_time(&self, t: Turn) -> Option<usize> {
        self.orbit(t).turns.iter().position(|x| x.is_degenerate())
    }

    /// A turn is legal when no iterate of the direction map makes it degenerate.
    pub fn is_legal(&self, t: Turn) -> bool {
        match self.legal.get(&t) {
            Some(&l) => l,
            None => self.degeneration_time(t).is_none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrainTrackVerdict {
    TrainTrack,
    /// `f^iterate(edge)` is not reduced, first failing at `turn`, a
    /// junction turn of `f(edge)`.
    NotTrainTrack {
        edge: Edge,
        iterate: usize,
        turn: Turn,
    },
}

/// Decides whether every iterate of `f` maps each edge to a reduced path.
///
/// All turns inside an iterate `f^t(e)` are images under the direction map of
/// junction turns of single edge images, so legality of those finitely many
/// turns settles the question; the witness is the smallest failing iterate.
pub fn is_train_track(f: &GraphMap) -> Result<TrainTrackVerdict, MapError> {
    f.require_reduced()?;
    let table = TurnTable::new(f)?;
    let mut best: Option<(usize, Edge, Turn)> = None;
    for e in f.domain().positive_edges() {
        let img = f.image(e);
        for w in img.windows(2) {
            let t = Turn::crossed(w[0], w[1]);
            if let Some(k) = table.degeneration_time(t) {
                if best.is_none_or(|(b, _, _)| k + 1 < b) {
                    best = Some((k + 1, e, t));
                }
            }
        }
    }
    Ok(match best {
        None => TrainTrackVerdict::TrainTrack,
        Some((iterate, edge, turn)) => TrainTrackVerdict::NotTrainTrack {
            edge,
            iterate,
            turn,
        },
    })
}

/// True when no edge has all of its iterates of length one.
pub fn is_expanding(f: &GraphMap) -> Result<bool, MapError> {
    if !f.is_self_map() {
        return Err(MapError::NotSelfMap);
    }
    f.require_reduced()?;
    let n = f.domain().edge_count();
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut i = start;
        while f.image_len(Edge::positive(i)) == 1 {
            if seen[i] {
                return Ok(false);
            }
            seen[i] = true;
            i = f.edge_images()[i][0].index();
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::graph::is_reduced;

    #[test]
    fn fibonacci_is_train_track() {
        assert_eq!(
            is_train_track(&fibonacci()),
            Ok(TrainTrackVerdict::TrainTrack)
        );
        assert_eq!(
            is_train_track(&thue_morse()),
            Ok(TrainTrackVerdict::TrainTrack)
        );
    }

    #[test]
    fn witness_is_a_first_unreduced_iterate() {
        let f = rose_map(&["a", "b"], &["a b", "~a"]);
        let v = is_train_track(&f).unwrap();
        let TrainTrackVerdict::NotTrainTrack { edge, iterate, .. } = v else {
            panic!("expected a witness");
        };
        assert_eq!((edge, iterate), (Edge(0), 4));
        let g = f.domain();
        for t in 0..iterate {
            let ft = f.power(t as u32).unwrap();
            assert!(g.positive_edges().all(|e| is_reduced(&ft.image(e))));
        }
        assert!(!is_reduced(&f.power(iterate as u32).unwrap().image(edge)));
    }

    #[test]
    fn orbit_shape() {
        let f = thue_morse();
        let t = TurnTable::new(&f).unwrap();
        let o = t.orbit(Turn::new(Edge(1), Edge(2)));
        assert_eq!((o.preperiod, o.period), (0, 2));
        assert_eq!(o.at(5), o.at(1));
    }

    #[test]
    fn expanding_detection() {
        assert!(is_expanding(&fibonacci()).unwrap());
        let f = rose_map(&["a", "b"], &["a b", "b"]);
        assert!(!is_expanding(&f).unwrap());
        let f = rose_map(&["a", "b"], &["b", "a"]);
        assert!(!is_expanding(&f).unwrap());
    }
}
