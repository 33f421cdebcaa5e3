//! Integer fitness values and the circular fitness history used by the
//! late-acceptance strategies.

/// Cost of a solution. Smaller is better; equality is exact.
pub type Fitness = i64;

/// Circular history of fitness values with a cached maximum.
///
/// `max_value` always equals the true maximum of `values`. `max_count` is a
/// lower bound on the number of entries equal to the maximum: it can
/// undercount after [`FitnessArray::dlas_replace`] raises a slot to the
/// current maximum, but it never overcounts, and when it reaches zero the
/// pair is rebuilt by a full scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitnessArray {
    values: Vec<Fitness>,
    max_value: Fitness,
    max_count: usize,
}

impl FitnessArray {
    /// Array of `len` copies of `initial`.
    ///
    /// # Panics
    /// If `len` is zero.
    pub fn new(len: usize, initial: Fitness) -> Self {
        assert!(len >= 1, "fitness array length must be at least 1");
        Self {
            values: vec![initial; len],
            max_value: initial,
            max_count: len,
        }
    }

    /// Builds an array from explicit contents with exact max bookkeeping.
    ///
    /// # Panics
    /// If `values` is empty.
    pub fn from_values(values: Vec<Fitness>) -> Self {
        assert!(
            !values.is_empty(),
            "fitness array length must be at least 1"
        );
        let mut array = Self {
            values,
            max_value: 0,
            max_count: 0,
        };
        array.recompute();
        array
    }

    /// Builds an array with caller-supplied bookkeeping, for replaying
    /// hand-traced states. The caller is responsible for consistency.
    pub fn with_state(values: Vec<Fitness>, max_value: Fitness, max_count: usize) -> Self {
        assert!(
            !values.is_empty(),
            "fitness array length must be at least 1"
        );
        Self {
            values,
            max_value,
            max_count,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, slot: usize) -> Fitness {
        self.values[slot]
    }

    pub fn values(&self) -> &[Fitness] {
        &self.values
    }

    /// Cached maximum.
    #[inline]
    pub fn max_value(&self) -> Fitness {
        self.max_value
    }

    /// Cached count of maximal entries (a lower bound, see type docs).
    #[inline]
    pub fn max_count(&self) -> usize {
        self.max_count
    }

    /// Slot addressed at iteration `iteration`.
    #[inline]
    pub fn slot_for(&self, iteration: u64) -> usize {
        (iteration % self.values.len() as u64) as usize
    }

    /// Rebuilds `max_value` and `max_count` from a full scan.
    pub fn recompute(&mut self) {
        let (max, count) = scan_max(&self.values);
        self.max_value = max;
        self.max_count = count;
    }

    /// LAHC replacement: `values[slot] <- current` iff `current < values[slot]`.
    ///
    /// LAHC only ever lowers entries, so decrementing the count when a
    /// maximal entry is overwritten keeps both fields exact.
    /// Returns whether a write happened.
    pub fn lahc_replace(&mut self, slot: usize, current: Fitness) -> bool {
        let old = self.values[slot];
        if current < old {
            if old == self.max_value {
                self.max_count -= 1;
            }
            self.values[slot] = current;
            if self.max_count == 0 {
                self.recompute();
            }
            true
        } else {
            false
        }
    }

    /// DLAS replacement.
    ///
    /// * `current > values[slot]`: overwrite, count untouched.
    /// * `current < values[slot]` and `current < previous`: if the slot held
    ///   the maximum, decrement the count; overwrite; rescan when the count
    ///   hits zero.
    /// * otherwise: no change.
    ///
    /// Returns whether a write happened.
    pub fn dlas_replace(&mut self, slot: usize, current: Fitness, previous: Fitness) -> bool {
        let old = self.values[slot];
        if current > old {
            self.values[slot] = current;
            true
        } else if current < old && current < previous {
            if old == self.max_value {
                self.max_count -= 1;
            }
            self.values[slot] = current;
            if self.max_count == 0 {
                self.recompute();
            }
            true
        } else {
            false
        }
    }
}

/// Maximum of a non-empty slice and how many times it occurs.
pub fn scan_max(values: &[Fitness]) -> (Fitness, usize) {
    let mut max = values[0];
    let mut count = 0;
    for &v in values {
        if v > max {
            max = v;
            count = 1;
        } else if v == max {
            count += 1;
        }
    }
    (max, count)
}
