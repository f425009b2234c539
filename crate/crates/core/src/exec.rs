//! Grid evaluation strategies.
//!
//! Every numeric oracle in this crate samples a smooth function on a uniform
//! grid and then reduces the samples. Sampling is embarrassingly parallel;
//! reduction is always done sequentially, in grid order, so both strategies
//! return bit-identical results.

/// How grid samples are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    /// Evaluated on the rayon pool when the `parallel` feature is enabled,
    /// sequentially otherwise.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Evaluates `f(0), f(1), ..., f(len - 1)` and returns them in index order.
    pub fn sample<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..len).map(f).collect(),
            Strategy::Parallel => sample_parallel(len, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn sample_parallel<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn sample_parallel<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Uniform grid of `intervals + 1` nodes from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub end: f64,
    pub intervals: usize,
}

impl UniformGrid {
    pub fn new(start: f64, end: f64, intervals: usize) -> Self {
        assert!(intervals > 0, "a grid needs at least one interval");
        Self {
            start,
            end,
            intervals,
        }
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / self.intervals as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.intervals {
            self.end
        } else {
            self.start + self.step() * k as f64
        }
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Composite trapezoidal rule. The step carries the sign of
    /// `end - start`, so reversed grids integrate backwards.
    pub fn trapezoid<F>(&self, strategy: Strategy, f: F) -> f64
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let values = strategy.sample(self.len(), |k| f(self.node(k)));
        let last = values.len() - 1;
        let inner: f64 = values[1..last].iter().sum();
        self.step() * (0.5 * (values[0] + values[last]) + inner)
    }
}
