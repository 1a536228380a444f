//! One-vs-one majority voting: compose any binary classifier over all
//! class pairs, tally votes, predict by maximum vote, and turn the vote
//! margin into a label dissimilarity on the exact half-grid.
//!
//! Farness for a voting display reuses the per-input-kind routes of the
//! other modules (Mahalanobis, dissimilarity medians, or kernel subspaces
//! on the same kernel the pairwise models trained on).

use crate::error::Error;
use crate::numeric::Mat;
use crate::svm::smo::train_svm_smo;
use crate::Result;

/// Unordered class pairs `(a, b)` with `a < b`, in nested ascending order:
/// (1,2), (1,3), ..., (1,G), (2,3), ...
pub fn class_pairs(n_classes: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n_classes * (n_classes.saturating_sub(1)) / 2);
    for a in 1..=n_classes {
        for b in a + 1..=n_classes {
            pairs.push((a, b));
        }
    }
    pairs
}

/// Vote tallies from a full one-vs-one tournament.
#[derive(Debug, Clone)]
pub struct VoteTable {
    counts: Vec<Vec<usize>>,
    n_classes: usize,
}

impl VoteTable {
    /// Number of objects.
    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// Number of classes G.
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Number of pairwise comparisons C = G(G-1)/2; every object's votes
    /// sum to exactly this.
    pub fn comparisons(&self) -> usize {
        self.n_classes * (self.n_classes - 1) / 2
    }

    /// Votes object `i` gave to each class, indexed by class - 1.
    pub fn votes(&self, i: usize) -> &[usize] {
        &self.counts[i]
    }
}

/// Run a full one-vs-one tournament. For each pair `(a, b)` with `a < b`,
/// `score_pair` returns one signed decision value per object — positive
/// sides with `a`, nonpositive with `b` — and every object receives one
/// vote per pair, so each object's votes sum to C. Scoring all `n` objects
/// with every pairwise model (including objects belonging to neither class
/// of the pair) is what makes that sum exact.
pub fn run_one_vs_one<F>(n: usize, n_classes: usize, mut score_pair: F) -> Result<VoteTable>
where
    F: FnMut(usize, usize) -> Result<Vec<f64>>,
{
    if n_classes < 2 {
        return Err(Error::InvalidInput(
            "one-vs-one voting needs at least 2 classes".into(),
        ));
    }
    let mut counts = vec![vec![0usize; n_classes]; n];
    for (a, b) in class_pairs(n_classes) {
        let decisions = score_pair(a, b)?;
        if decisions.len() != n {
            return Err(Error::InvalidInput(format!(
                "pair ({a}, {b}) scored {} objects, expected {n}",
                decisions.len()
            )));
        }
        for (i, &d) in decisions.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::Numeric(format!(
                    "pair ({a}, {b}): non-finite decision value for object {i}"
                )));
            }
            let winner = if d > 0.0 { a } else { b };
            counts[i][winner - 1] += 1;
        }
    }
    Ok(VoteTable { counts, n_classes })
}

/// Prefix a pairwise failure with the pair that caused it, where the error
/// carries a free-form message.
fn name_pair(e: Error, a: usize, b: usize) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("pair ({a}, {b}): {m}")),
        Error::Numeric(m) => Error::Numeric(format!("pair ({a}, {b}): {m}")),
        Error::NoConvergence(m) => Error::NoConvergence(format!("pair ({a}, {b}): {m}")),
        other => other,
    }
}

/// One-vs-one voting with a binary SVM on each pair, all trained against
/// the same kernel matrix. The C pairwise models are independent, so they
/// train on separate threads; votes are tallied afterwards in pair order,
/// which keeps the result deterministic.
pub fn svm_one_vs_one(
    kernel: &Mat,
    labels: &[usize],
    n_classes: usize,
    cost: f64,
) -> Result<VoteTable> {
    let n = kernel.rows();
    if labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} labels for {n} kernel rows",
            labels.len()
        )));
    }
    let pairs = class_pairs(n_classes);
    let mut decision_lists: Vec<Result<Vec<f64>>> = Vec::with_capacity(pairs.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(a, b)| {
                scope.spawn(move || -> Result<Vec<f64>> {
                    let mut indices = Vec::new();
                    let mut y = Vec::new();
                    for (i, &l) in labels.iter().enumerate() {
                        if l == a || l == b {
                            indices.push(i);
                            y.push(if l == a { 1.0 } else { -1.0 });
                        }
                    }
                    let model = train_svm_smo(kernel, &indices, &y, cost)
                        .map_err(|e| name_pair(e, a, b))?;
                    Ok(model.decision_values(kernel))
                })
            })
            .collect();
        for handle in handles {
            decision_lists.push(handle.join().expect("pairwise training panicked"));
        }
    });
    let mut iter = decision_lists.into_iter();
    run_one_vs_one(n, n_classes, |_, _| {
        iter.next().expect("one decision list per pair")
    })
}

/// Class with the most votes; ties go to the smallest class index.
pub fn voting_predict(votes: &[usize]) -> usize {
    let max = *votes.iter().max().expect("at least one class");
    votes.iter().position(|&v| v == max).unwrap() + 1
}

/// Label dissimilarity of the given class from its vote margin.
///
/// With `N` the given class's votes, `N̂` the maximum and `Ñ` the best
/// competitor (maximum over other classes): when `N < N̂` the raw margin is
/// `(N̂ − N) / N̂` in (0, 1]; when `N = N̂` it is `(Ñ − N) / ⌊G/2⌋` in
/// [−1, 0] (every true tournament satisfies `N − Ñ ≤ ⌊G/2⌋`, see
/// [`verify_vote_bounds`]). The margin is mapped onto [0, 1] by
/// `(raw + 1) / 2`, evaluated as a single integer ratio so grid values are
/// exact.
pub fn voting_ld(votes: &[usize], given: usize, n_classes: usize) -> f64 {
    let n_given = votes[given - 1];
    let n_hat = *votes.iter().max().expect("at least one class");
    let ld = if n_given < n_hat {
        // ((n_hat - n_given) / n_hat + 1) / 2 as one exact ratio.
        (2 * n_hat - n_given) as f64 / (2 * n_hat) as f64
    } else {
        let n_tilde = votes
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != given - 1)
            .map(|(_, &v)| v)
            .max()
            .expect("at least two classes");
        let m = n_classes / 2;
        // ((n_tilde - n_given) / m + 1) / 2 as one exact ratio.
        (n_tilde as i64 + m as i64 - n_given as i64) as f64 / (2 * m) as f64
    };
    ld.clamp(0.0, 1.0)
}

/// Label dissimilarity for every object in the table.
pub fn voting_lds(table: &VoteTable, labels: &[usize]) -> Vec<f64> {
    labels
        .iter()
        .enumerate()
        .map(|(i, &g)| voting_ld(table.votes(i), g, table.n_classes()))
        .collect()
}

/// Result of exhaustively enumerating every possible pairwise tournament
/// for one object.
#[derive(Debug, Clone, Copy)]
pub struct VoteBoundReport {
    /// Number of classes G.
    pub n_classes: usize,
    /// Number of pair comparisons C = G(G-1)/2.
    pub comparisons: usize,
    /// The claimed lower bound ⌈G/2⌉ − 1 on the best competitor's votes.
    pub bound: usize,
    /// Smallest best-competitor vote count observed over all tournaments
    /// and all choices of given class.
    pub min_best_competing: usize,
    /// Smallest raw margin observed (−1 exactly when the bound is sharp).
    pub raw_min: f64,
    /// Largest raw margin observed (1 exactly when some class can end up
    /// with zero votes while another wins).
    pub raw_max: f64,
}

/// Enumerate all `2^C` pairwise tournaments for one object and measure the
/// extremes of the best-competitor count and the raw margin. Confirms the
/// tournament arithmetic the dissimilarity formula relies on: the best
/// competitor always has at least `⌈G/2⌉ − 1` votes (so the raw margin
/// never leaves [−1, 1]) and the bound is attained.
pub fn verify_vote_bounds(n_classes: usize) -> VoteBoundReport {
    assert!(
        (3..=7).contains(&n_classes),
        "enumeration is sized for 3..=7 classes"
    );
    let pairs = class_pairs(n_classes);
    let c = pairs.len();
    let m = n_classes / 2;
    let mut min_best_competing = usize::MAX;
    let mut raw_min = f64::INFINITY;
    let mut raw_max = f64::NEG_INFINITY;

    let mut counts = vec![0usize; n_classes];
    for tournament in 0u32..(1u32 << c) {
        counts.fill(0);
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let winner = if tournament >> k & 1 == 1 { a } else { b };
            counts[winner - 1] += 1;
        }
        for given in 1..=n_classes {
            let n_given = counts[given - 1];
            let n_tilde = counts
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != given - 1)
                .map(|(_, &v)| v)
                .max()
                .unwrap();
            min_best_competing = min_best_competing.min(n_tilde);
            let n_hat = n_given.max(n_tilde);
            let raw = if n_given < n_hat {
                (n_hat - n_given) as f64 / n_hat as f64
            } else {
                (n_tilde as f64 - n_given as f64) / m as f64
            };
            raw_min = raw_min.min(raw);
            raw_max = raw_max.max(raw);
        }
    }

    VoteBoundReport {
        n_classes,
        comparisons: c,
        bound: n_classes.div_ceil(2) - 1,
        min_best_competing,
        raw_min,
        raw_max,
    }
}
