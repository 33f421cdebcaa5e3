//! Quadratic assignment: QAPLIB files, permutation cost and the pairwise
//! swap move with an O(n) exact delta.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{ConfigError, ParseError};
use crate::fitness::Fitness;
use crate::problem::Problem;
use crate::tsp::is_permutation;

/// Square integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    /// # Panics
    /// If `data.len() != n * n`.
    pub fn new(n: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data must hold n*n entries");
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let data: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(n, data)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QapInstance {
    pub name: String,
    a: Matrix,
    b: Matrix,
}

impl QapInstance {
    /// # Panics
    /// If the matrices differ in size or are smaller than 2x2.
    pub fn new(name: impl Into<String>, a: Matrix, b: Matrix) -> Self {
        assert_eq!(a.size(), b.size(), "QAP matrices must have the same size");
        assert!(a.size() >= 2, "QAP needs at least 2 facilities");
        Self {
            name: name.into(),
            a,
            b,
        }
    }

    pub fn size(&self) -> usize {
        self.a.size()
    }

    /// First matrix in the file.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Second matrix in the file.
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// `sum_{i,j} A[i][j] * B[p(i)][p(j)]`.
    pub fn cost(&self, assignment: &Assignment) -> Fitness {
        let p = assignment.perm();
        let n = self.size();
        let mut total = 0i64;
        for i in 0..n {
            let a_row = self.a.row(i);
            let b_row = self.b.row(p[i]);
            for j in 0..n {
                total += a_row[j] * b_row[p[j]];
            }
        }
        total
    }

    /// Exact cost change of exchanging `p(r)` and `p(s)`.
    ///
    /// Handles asymmetric matrices and non-zero diagonals.
    #[inline]
    pub fn swap_delta(&self, assignment: &Assignment, mv: SwapMove) -> Fitness {
        let p = assignment.perm();
        let (r, s) = (mv.r, mv.s);
        let (pr, ps) = (p[r], p[s]);
        let a = &self.a;
        let b = &self.b;

        let mut d = a.get(r, r) * (b.get(ps, ps) - b.get(pr, pr))
            + a.get(r, s) * (b.get(ps, pr) - b.get(pr, ps))
            + a.get(s, r) * (b.get(pr, ps) - b.get(ps, pr))
            + a.get(s, s) * (b.get(pr, pr) - b.get(ps, ps));
        for (k, &pk) in p.iter().enumerate() {
            if k == r || k == s {
                continue;
            }
            d += a.get(k, r) * (b.get(pk, ps) - b.get(pk, pr))
                + a.get(k, s) * (b.get(pk, pr) - b.get(pk, ps))
                + a.get(r, k) * (b.get(ps, pk) - b.get(pr, pk))
                + a.get(s, k) * (b.get(pr, pk) - b.get(ps, pk));
        }
        d
    }

    /// Parses the QAPLIB plain format: `n`, then `A` and `B` row-major, all
    /// whitespace separated with arbitrary line breaks.
    pub fn parse_qaplib(text: &str) -> Result<Self, ParseError> {
        let mut tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| line.split_whitespace().map(move |t| (i + 1, t)));

        let (line, first) = tokens
            .next()
            .ok_or_else(|| ParseError::new(0, "empty input"))?;
        let n: usize = first
            .parse()
            .map_err(|_| ParseError::new(line, format!("bad size `{first}`")))?;
        if n < 2 {
            return Err(ParseError::new(line, format!("size {n} is below 2")));
        }
        let expected = 2 * n * n;
        let mut values = Vec::with_capacity(expected);
        for (line, tok) in tokens {
            if values.len() == expected {
                return Err(ParseError::new(
                    line,
                    format!(
                        "extra token `{tok}`: expected exactly {} numbers",
                        1 + expected
                    ),
                ));
            }
            let v: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(line, format!("non-integer token `{tok}`")))?;
            values.push(v);
        }
        if values.len() != expected {
            return Err(ParseError::new(
                0,
                format!(
                    "expected {} numbers for n = {n}, found {}",
                    1 + expected,
                    1 + values.len()
                ),
            ));
        }
        let b = values.split_off(n * n);
        Ok(Self::new("", Matrix::new(n, values), Matrix::new(n, b)))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Permutation assigning index `i` to `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    /// # Panics
    /// If `perm` is not a permutation of `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Self {
        assert!(is_permutation(&perm), "assignment must be a permutation");
        Self(perm)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        Self(perm)
    }

    pub fn perm(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&mut self, mv: SwapMove) {
        self.0.swap(mv.r, mv.s);
    }
}

/// Exchange the assignments of `r` and `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapMove {
    pub r: usize,
    pub s: usize,
}

impl SwapMove {
    pub fn new(r: usize, s: usize) -> Result<Self, ConfigError> {
        if r == s {
            return Err(ConfigError::field(
                "swap",
                format!("indices must differ, got {r} twice"),
            ));
        }
        Ok(Self { r, s })
    }

    /// Uniform pair of distinct indices; `s` is redrawn until it differs
    /// from `r`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let r = rng.random_range(0..n);
        loop {
            let s = rng.random_range(0..n);
            if s != r {
                return Self { r, s };
            }
        }
    }
}

impl Problem for QapInstance {
    type Solution = Assignment;
    type Move = SwapMove;

    fn size(&self) -> usize {
        QapInstance::size(self)
    }

    fn min_size(&self) -> usize {
        2
    }

    fn initial_solution<R: Rng + ?Sized>(&self, rng: &mut R) -> Assignment {
        Assignment::random(self.size(), rng)
    }

    fn fitness(&self, solution: &Assignment) -> Fitness {
        self.cost(solution)
    }

    fn propose_move<R: Rng + ?Sized>(&self, solution: &Assignment, rng: &mut R) -> SwapMove {
        SwapMove::random(solution.perm().len(), rng)
    }

    #[inline]
    fn move_delta(&self, solution: &Assignment, mv: SwapMove) -> Fitness {
        self.swap_delta(solution, mv)
    }

    fn apply_move(&self, solution: &mut Assignment, mv: SwapMove) {
        solution.apply(mv);
    }
}
