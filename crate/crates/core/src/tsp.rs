//! Symmetric Euclidean TSP: TSPLIB coordinate files, integer tour length
//! and the segment-reversal move.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::ParseError;
use crate::fitness::Fitness;
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeightKind {
    /// Euclidean distance rounded to the nearest integer.
    Euc2d,
    /// Euclidean distance rounded up.
    Ceil2d,
}

impl EdgeWeightKind {
    pub fn keyword(self) -> &'static str {
        match self {
            Self::Euc2d => "EUC_2D",
            Self::Ceil2d => "CEIL_2D",
        }
    }

    #[inline]
    pub fn round(self, d: f64) -> Fitness {
        match self {
            // TSPLIB nint(): (int)(x + 0.5)
            Self::Euc2d => (d + 0.5).floor() as Fitness,
            Self::Ceil2d => d.ceil() as Fitness,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub name: String,
    pub edge_weight: EdgeWeightKind,
    coords: Vec<(f64, f64)>,
}

impl TspInstance {
    /// # Panics
    /// If fewer than three cities are given.
    pub fn new(
        name: impl Into<String>,
        edge_weight: EdgeWeightKind,
        coords: Vec<(f64, f64)>,
    ) -> Self {
        assert!(coords.len() >= 3, "a TSP instance needs at least 3 cities");
        Self {
            name: name.into(),
            edge_weight,
            coords,
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Rounded distance between cities `a` and `b`, computed on the fly.
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> Fitness {
        let (xa, ya) = self.coords[a];
        let (xb, yb) = self.coords[b];
        let dx = xa - xb;
        let dy = ya - yb;
        self.edge_weight.round((dx * dx + dy * dy).sqrt())
    }

    /// Length of the closed tour.
    pub fn tour_length(&self, tour: &Tour) -> Fitness {
        let order = tour.order();
        let n = order.len();
        (0..n)
            .map(|i| self.distance(order[i], order[(i + 1) % n]))
            .sum()
    }

    /// Exact change in tour length from reversing `order[i+1..=j]`.
    #[inline]
    pub fn reversal_delta(&self, tour: &Tour, mv: ReversalMove) -> Fitness {
        let t = tour.order();
        let n = t.len();
        let (i, j) = (mv.i, mv.j);
        let a = t[i];
        let b = t[i + 1];
        let c = t[j];
        let d = t[(j + 1) % n];
        self.distance(a, c) + self.distance(b, d) - self.distance(a, b) - self.distance(c, d)
    }

    /// Parses the TSPLIB subset with `NODE_COORD_SECTION` and an
    /// `EUC_2D` or `CEIL_2D` edge weight type.
    pub fn parse_tsplib(text: &str) -> Result<Self, ParseError> {
        let mut name = String::new();
        let mut dimension: Option<usize> = None;
        let mut edge_weight: Option<EdgeWeightKind> = None;
        let mut coords: Option<Vec<Option<(f64, f64)>>> = None;
        let mut in_coords = false;
        let mut seen = 0usize;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line == "EOF" {
                break;
            }
            if in_coords {
                // a keyword line ends the section
                if line.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    in_coords = false;
                } else {
                    let slots = coords.as_mut().expect("coords allocated on section start");
                    let mut fields = line.split_whitespace();
                    let (Some(id), Some(x), Some(y), None) =
                        (fields.next(), fields.next(), fields.next(), fields.next())
                    else {
                        return Err(ParseError::new(
                            lineno,
                            format!("malformed coordinate line `{line}`"),
                        ));
                    };
                    let id: usize = id
                        .parse()
                        .map_err(|_| ParseError::new(lineno, format!("bad node id `{id}`")))?;
                    let x: f64 = x
                        .parse()
                        .map_err(|_| ParseError::new(lineno, format!("bad coordinate `{x}`")))?;
                    let y: f64 = y
                        .parse()
                        .map_err(|_| ParseError::new(lineno, format!("bad coordinate `{y}`")))?;
                    if !x.is_finite() || !y.is_finite() {
                        return Err(ParseError::new(lineno, "non-finite coordinate"));
                    }
                    if id == 0 || id > slots.len() {
                        return Err(ParseError::new(
                            lineno,
                            format!("node id {id} outside 1..={}", slots.len()),
                        ));
                    }
                    if slots[id - 1].replace((x, y)).is_some() {
                        return Err(ParseError::new(lineno, format!("duplicate node id {id}")));
                    }
                    seen += 1;
                    continue;
                }
            }

            let (key, value) = split_keyword(line);
            match key {
                "NAME" => name = value.to_string(),
                "COMMENT" => {}
                "TYPE" => {
                    if value != "TSP" {
                        return Err(ParseError::new(
                            lineno,
                            format!("unsupported TYPE `{value}`"),
                        ));
                    }
                }
                "DIMENSION" => {
                    let n: usize = value
                        .parse()
                        .map_err(|_| ParseError::new(lineno, format!("bad DIMENSION `{value}`")))?;
                    if n < 3 {
                        return Err(ParseError::new(lineno, format!("DIMENSION {n} is below 3")));
                    }
                    dimension = Some(n);
                }
                "EDGE_WEIGHT_TYPE" => {
                    edge_weight = Some(match value {
                        "EUC_2D" => EdgeWeightKind::Euc2d,
                        "CEIL_2D" => EdgeWeightKind::Ceil2d,
                        other => {
                            return Err(ParseError::new(
                                lineno,
                                format!("unsupported EDGE_WEIGHT_TYPE `{other}`"),
                            ))
                        }
                    });
                }
                "NODE_COORD_SECTION" => {
                    let n = dimension.ok_or_else(|| {
                        ParseError::new(lineno, "NODE_COORD_SECTION before DIMENSION")
                    })?;
                    if coords.is_some() {
                        return Err(ParseError::new(lineno, "repeated NODE_COORD_SECTION"));
                    }
                    coords = Some(vec![None; n]);
                    in_coords = true;
                }
                "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" => {}
                other if other.ends_with("_SECTION") => {
                    return Err(ParseError::new(
                        lineno,
                        format!("unsupported section `{other}`"),
                    ));
                }
                other => {
                    return Err(ParseError::new(
                        lineno,
                        format!("unknown keyword `{other}`"),
                    ));
                }
            }
        }

        let dimension = dimension.ok_or_else(|| ParseError::new(0, "missing DIMENSION"))?;
        let edge_weight =
            edge_weight.ok_or_else(|| ParseError::new(0, "missing EDGE_WEIGHT_TYPE"))?;
        let slots = coords.ok_or_else(|| ParseError::new(0, "missing NODE_COORD_SECTION"))?;
        if seen != dimension {
            return Err(ParseError::new(
                0,
                format!("DIMENSION is {dimension} but {seen} coordinates were given"),
            ));
        }
        let coords = slots
            .into_iter()
            .map(|c| c.expect("all ids seen"))
            .collect();
        Ok(Self {
            name,
            edge_weight,
            coords,
        })
    }

    /// Writes the instance back in TSPLIB form. Coordinates use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.dimension());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.edge_weight.keyword());
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (i, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {:?} {:?}", i + 1, x, y);
        }
        out.push_str("EOF\n");
        out
    }
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim(), v.trim()),
        None => match line.split_once(char::is_whitespace) {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        },
    }
}

/// Cyclic visiting order of all cities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour(Vec<usize>);

impl Tour {
    /// # Panics
    /// If `order` is not a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Self {
        assert!(is_permutation(&order), "tour must be a permutation");
        Self(order)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&mut self, mv: ReversalMove) {
        self.0[mv.i + 1..=mv.j].reverse();
    }
}

pub(crate) fn is_permutation(values: &[usize]) -> bool {
    let mut seen = vec![false; values.len()];
    values
        .iter()
        .all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// Reverse the tour positions `i+1..=j`, with `0 <= i < j < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReversalMove {
    pub i: usize,
    pub j: usize,
}

impl ReversalMove {
    /// # Panics
    /// Unless `i < j`.
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i < j, "reversal cut points must satisfy i < j");
        Self { i, j }
    }

    /// Draws a cut pair uniformly among all `n(n-1)/2` pairs `i < j`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        Self {
            i: a.min(b),
            j: a.max(b),
        }
    }
}

impl Problem for TspInstance {
    type Solution = Tour;
    type Move = ReversalMove;

    fn size(&self) -> usize {
        self.dimension()
    }

    fn min_size(&self) -> usize {
        4
    }

    fn initial_solution<R: Rng + ?Sized>(&self, rng: &mut R) -> Tour {
        Tour::random(self.dimension(), rng)
    }

    fn fitness(&self, solution: &Tour) -> Fitness {
        self.tour_length(solution)
    }

    fn propose_move<R: Rng + ?Sized>(&self, solution: &Tour, rng: &mut R) -> ReversalMove {
        ReversalMove::random(solution.len(), rng)
    }

    #[inline]
    fn move_delta(&self, solution: &Tour, mv: ReversalMove) -> Fitness {
        self.reversal_delta(solution, mv)
    }

    fn apply_move(&self, solution: &mut Tour, mv: ReversalMove) {
        solution.apply(mv);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    const TRIANGLE: &str = "NAME : tri3
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
";

    fn rectangle() -> TspInstance {
        TspInstance::new(
            "rect",
            EdgeWeightKind::Euc2d,
            vec![(0.0, 0.0), (0.0, 3.0), (4.0, 3.0), (4.0, 0.0)],
        )
    }

    #[test]
    fn triangle_distances() {
        let inst = TspInstance::parse_tsplib(TRIANGLE).unwrap();
        assert_eq!(inst.dimension(), 3);
        assert_eq!(inst.name, "tri3");
        assert_eq!(inst.distance(0, 1), 3);
        assert_eq!(inst.distance(1, 2), 5);
        assert_eq!(inst.distance(2, 0), 4);
    }

    #[test]
    fn rounding_conventions() {
        assert_eq!(EdgeWeightKind::Ceil2d.round(2.0001), 3);
        assert_eq!(EdgeWeightKind::Ceil2d.round(2.0), 2);
        assert_eq!(EdgeWeightKind::Euc2d.round(2.5), 3);
        assert_eq!(EdgeWeightKind::Euc2d.round(2.4999), 2);
    }

    #[test]
    fn rectangle_perimeter() {
        let inst = rectangle();
        assert_eq!(inst.tour_length(&Tour::new(vec![0, 1, 2, 3])), 14);
    }

    #[test]
    fn reversal_reaches_perimeter_tour() {
        let inst = rectangle();
        let mut tour = Tour::new(vec![0, 2, 1, 3]);
        // 0-2 is the diagonal (5), 2-1 is 4, 1-3 is the other diagonal (5), 3-0 is 4
        let before = inst.tour_length(&tour);
        assert_eq!(before, 18);
        let mv = ReversalMove::new(0, 2);
        let delta = inst.reversal_delta(&tour, mv);
        tour.apply(mv);
        assert_eq!(tour.order(), &[0, 1, 2, 3]);
        assert_eq!(delta, 14 - before);
    }

    #[test]
    fn degenerate_moves_have_zero_delta() {
        let inst = rectangle();
        let tour = Tour::new(vec![0, 2, 1, 3]);
        for i in 0..3 {
            assert_eq!(inst.reversal_delta(&tour, ReversalMove::new(i, i + 1)), 0);
        }
        assert_eq!(inst.reversal_delta(&tour, ReversalMove::new(0, 3)), 0);
    }

    #[test]
    fn reversed_tour_has_same_length() {
        let inst = rectangle();
        let tour = Tour::new(vec![0, 2, 1, 3]);
        let rev = Tour::new(tour.order().iter().rev().copied().collect());
        assert_eq!(inst.tour_length(&tour), inst.tour_length(&rev));
    }

    #[test]
    fn random_moves_are_deterministic() {
        let mut a = rng_from_seed(5);
        let mut b = rng_from_seed(5);
        for _ in 0..50 {
            let m = ReversalMove::random(5, &mut a);
            assert_eq!(m, ReversalMove::random(5, &mut b));
            assert!(m.i < m.j && m.j < 5);
        }
    }

    #[test]
    fn too_small_for_reversal() {
        let inst = TspInstance::new(
            "t",
            EdgeWeightKind::Euc2d,
            vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
        );
        assert!(inst.check().is_err());
        assert!(rectangle().check().is_ok());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let bad_kind = TRIANGLE.replace("EUC_2D", "GEO");
        assert_eq!(TspInstance::parse_tsplib(&bad_kind).unwrap_err().line, 4);

        let bad_line = TRIANGLE.replace("2 3 0", "2 3");
        let err = TspInstance::parse_tsplib(&bad_line).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("malformed"));

        let bad_number = TRIANGLE.replace("3 0 4", "3 0 x4");
        assert_eq!(TspInstance::parse_tsplib(&bad_number).unwrap_err().line, 8);

        let short = TRIANGLE.replace("3 0 4\n", "");
        let err = TspInstance::parse_tsplib(&short).unwrap_err();
        assert!(err.message.contains("DIMENSION is 3"));

        let dup = TRIANGLE.replace("3 0 4", "2 0 4");
        assert_eq!(TspInstance::parse_tsplib(&dup).unwrap_err().line, 8);
    }

    #[test]
    fn parse_tolerates_layout_variants() {
        let text = "NAME: tri3\nCOMMENT : three cities\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: CEIL_2D\nNODE_COORD_SECTION\n  1   0.0e0 0\n2 3.0 0\n3 0 4.0\n";
        let inst = TspInstance::parse_tsplib(text).unwrap();
        assert_eq!(inst.edge_weight, EdgeWeightKind::Ceil2d);
        assert_eq!(inst.coords()[2], (0.0, 4.0));
    }

    #[test]
    fn permutation_check() {
        assert!(is_permutation(&[2, 0, 1]));
        assert!(!is_permutation(&[0, 0, 1]));
        assert!(!is_permutation(&[0, 3, 1]));
    }
}
