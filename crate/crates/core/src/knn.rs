//! Exact average holdout error of the k-nearest-neighbor Gibbs classifier.
//!
//! Split a set of `r + n` labeled in-sample points every possible way into
//! `r` training points and `n` holdout points. Each split trains a k-NN
//! classifier on its training part and scores it on its holdout part; the
//! Gibbs classifier over all splits has average holdout error equal to the
//! mean of those per-split error rates. Enumerating all `C(r+n, n)` splits
//! is exponential; reversing the order of expectation reduces the job to
//! one quantity per point:
//!
//! ```text
//! average error = mean over points q of
//!     P( k-NN on F - H misclassifies q | H uniform among size-n subsets containing q )
//! ```
//!
//! and that probability has an exact dynamic program over the neighbors of
//! `q` in nearness order. The state after considering `i` neighbors is
//! `(h, v)`: `h` of them landed in the holdout and `v` of the `i - h`
//! training ones carry the wrong label. The chance the next neighbor lands
//! in the holdout is `(n - h - 1) / (r + n - i)`. The classifier's votes
//! are fixed at the moment the k-th training neighbor appears, so
//! probability mass is absorbed into the answer exactly once, at that
//! transition — absorbed as an error when the wrong-label votes reach a
//! majority `(k + 1) / 2`. (Summing instead over every `i` with
//! `a_{i,i-k,v}` active would count a split again each time a later
//! neighbor lands in the holdout; the split-enumeration oracle
//! [`brute_force_average_holdout_error`] confirms the absorb-once rule.)
//!
//! Distance is Euclidean with ties broken by ascending point index, and
//! the oracle uses the identical ordering. Binary labels and odd `k` keep
//! the vote threshold well defined.

use thiserror::Error;

/// Default ceiling on `C(r+n, n)` for the split-enumeration oracle.
pub const DEFAULT_SPLIT_CAP: u64 = 1_000_000;

/// Errors for dataset construction and holdout-error evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnnError {
    #[error("dataset needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("feature values must be finite (point {index})")]
    NonFiniteFeature { index: usize },
    #[error("holdout size must satisfy 1 <= n <= points - 1, got n={n} of {total}")]
    InvalidHoldout { n: usize, total: usize },
    #[error("more than two distinct labels (found {0}); only binary labels are supported")]
    TooManyLabels(usize),
    #[error("k must be odd, got {0}")]
    EvenK(usize),
    #[error("k={k} exceeds the training size r={r}")]
    KTooLarge { k: usize, r: usize },
    #[error("point index {index} out of range for {total} points")]
    IndexOutOfRange { index: usize, total: usize },
    #[error("split probability arguments out of range: r={r}, n={n}, i={i}, h={h}")]
    SplitArgsOutOfRange { r: u64, n: u64, i: u64, h: u64 },
    #[error("{splits} splits exceed the enumeration cap of {cap}")]
    SplitCapExceeded { splits: u128, cap: u64 },
    #[error("dataset line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// In-sample points with labels and the holdout size of each split.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
    label_names: Vec<String>,
    n_holdout: usize,
}

impl LabeledDataset {
    /// Builds a dataset from `(features, label)` rows. All feature vectors
    /// must share one dimension `d >= 1`; at most two distinct labels.
    pub fn new(points: Vec<(Vec<f64>, String)>, n_holdout: usize) -> Result<Self, KnnError> {
        let total = points.len();
        if total < 2 {
            return Err(KnnError::TooFewPoints(total));
        }
        if n_holdout < 1 || n_holdout > total - 1 {
            return Err(KnnError::InvalidHoldout {
                n: n_holdout,
                total,
            });
        }
        let expected = points[0].0.len();
        if expected == 0 {
            return Err(KnnError::DimensionMismatch {
                index: 0,
                got: 0,
                expected: 1,
            });
        }
        let mut features = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        let mut label_names: Vec<String> = Vec::new();
        for (index, (feature, label)) in points.into_iter().enumerate() {
            if feature.len() != expected {
                return Err(KnnError::DimensionMismatch {
                    index,
                    got: feature.len(),
                    expected,
                });
            }
            if feature.iter().any(|v| !v.is_finite()) {
                return Err(KnnError::NonFiniteFeature { index });
            }
            let id = match label_names.iter().position(|l| *l == label) {
                Some(id) => id,
                None => {
                    label_names.push(label);
                    label_names.len() - 1
                }
            };
            if id > 1 {
                return Err(KnnError::TooManyLabels(label_names.len()));
            }
            features.push(feature);
            labels.push(id as u8);
        }
        Ok(Self {
            features,
            labels,
            label_names,
            n_holdout,
        })
    }

    /// Parses delimiter-separated text: one point per row, `d` numeric
    /// feature columns followed by one label column. Labels are arbitrary
    /// strings with at most two distinct values.
    pub fn parse_delimited(
        text: &str,
        delimiter: char,
        has_header: bool,
        n_holdout: usize,
    ) -> Result<Self, KnnError> {
        let mut points = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if has_header && line_no == 0 {
                continue;
            }
            let fields: Vec<&str> = line.split(delimiter).map(str::trim).collect();
            if fields.len() < 2 {
                return Err(KnnError::Parse {
                    line: line_no + 1,
                    message: "need at least one feature column and a label column".into(),
                });
            }
            let mut feature = Vec::with_capacity(fields.len() - 1);
            for field in &fields[..fields.len() - 1] {
                let value: f64 = field.parse().map_err(|_| KnnError::Parse {
                    line: line_no + 1,
                    message: format!("not a number: {field:?}"),
                })?;
                feature.push(value);
            }
            points.push((feature, fields[fields.len() - 1].to_string()));
        }
        Self::new(points, n_holdout)
    }

    /// Total number of in-sample points (`r + n`).
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Feature dimension.
    pub fn dim(&self) -> usize {
        self.features[0].len()
    }

    /// Holdout examples per split.
    pub fn n_holdout(&self) -> usize {
        self.n_holdout
    }

    /// Training examples per split.
    pub fn r_train(&self) -> usize {
        self.len() - self.n_holdout
    }

    pub fn feature(&self, index: usize) -> &[f64] {
        &self.features[index]
    }

    /// Label id (0 or 1) of a point.
    pub fn label(&self, index: usize) -> u8 {
        self.labels[index]
    }

    /// Distinct label names in first-appearance order.
    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Indices of every point except `q`, sorted by ascending Euclidean
/// distance to `q`, ties broken by ascending index. Every computation in
/// this module — the dynamic program and the oracle alike — consumes this
/// one ordering.
pub fn neighbor_ordering(data: &LabeledDataset, q: usize) -> Result<Vec<usize>, KnnError> {
    if q >= data.len() {
        return Err(KnnError::IndexOutOfRange {
            index: q,
            total: data.len(),
        });
    }
    let query = data.feature(q);
    let mut order: Vec<usize> = (0..data.len()).filter(|&i| i != q).collect();
    order.sort_by(|&a, &b| {
        squared_distance(data.feature(a), query)
            .total_cmp(&squared_distance(data.feature(b), query))
            .then(a.cmp(&b))
    });
    Ok(order)
}

/// Probability that the i-th nearest neighbor of a holdout point lands in
/// the holdout set, given `h` of the first `i - 1` neighbors already did:
/// `max((n - h - 1) / (r + n - i), 0)`.
pub fn split_membership_probability(r: u64, n: u64, i: u64, h: u64) -> Result<f64, KnnError> {
    if i < 1 || i > r + n - 1 || h >= i {
        return Err(KnnError::SplitArgsOutOfRange { r, n, i, h });
    }
    Ok(membership_probability(r, n, i, h))
}

fn membership_probability(r: u64, n: u64, i: u64, h: u64) -> f64 {
    let numerator = n as f64 - h as f64 - 1.0;
    (numerator / (r + n - i) as f64).max(0.0)
}

/// The forward recurrence over one query point's neighbors.
///
/// `active(h, v)` holds the probability that, after the neighbors
/// considered so far, `h` landed in the holdout and the `i - h` training
/// ones include `v` wrong-label votes — for states whose k votes are not
/// yet fixed. Mass absorbed when the k-th training neighbor appears moves
/// to `absorbed_error` or `absorbed_correct`; the three always total one.
#[derive(Debug, Clone)]
pub struct SplitDpState {
    r: usize,
    n: usize,
    k: usize,
    step: usize,
    /// active[h * k + v]; the training count is implicit (step - h).
    active: Vec<f64>,
    absorbed_error: f64,
    absorbed_correct: f64,
}

impl SplitDpState {
    /// Starts at `i = 0` with all mass on the empty state.
    pub fn new(r: usize, n: usize, k: usize) -> Self {
        let mut active = vec![0.0; n * k];
        active[0] = 1.0;
        Self {
            r,
            n,
            k,
            step: 0,
            active,
            absorbed_error: 0.0,
            absorbed_correct: 0.0,
        }
    }

    /// Consumes the next neighbor in nearness order; `wrong_label` says
    /// whether its label differs from the query point's.
    pub fn advance(&mut self, wrong_label: bool) {
        let i = self.step + 1;
        debug_assert!(i < self.r + self.n, "advanced past the last neighbor");
        let k = self.k;
        let mut next = vec![0.0; self.active.len()];
        // Active states after step i-1 have h in [max(0, i-1-(k-1)), min(i-1, n-1)].
        let h_hi = (i - 1).min(self.n - 1);
        let h_lo = (i - 1).saturating_sub(k - 1);
        for h in h_lo..=h_hi {
            let trained = (i - 1) - h;
            for v in 0..=trained.min(k - 1) {
                let mass = self.active[h * k + v];
                if mass == 0.0 {
                    continue;
                }
                let p_in = membership_probability(self.r as u64, self.n as u64, i as u64, h as u64);
                if p_in > 0.0 {
                    next[(h + 1) * k + v] += mass * p_in;
                }
                let out_mass = mass * (1.0 - p_in);
                if out_mass > 0.0 {
                    let v_new = v + usize::from(wrong_label);
                    if trained + 1 == k {
                        // The k votes are fixed here; absorb exactly once.
                        if 2 * v_new > k {
                            self.absorbed_error += out_mass;
                        } else {
                            self.absorbed_correct += out_mass;
                        }
                    } else {
                        next[h * k + v_new] += out_mass;
                    }
                }
            }
        }
        self.active = next;
        self.step = i;
    }

    /// Probability mass still in play.
    pub fn active_mass(&self) -> f64 {
        self.active.iter().sum()
    }

    pub fn absorbed_error(&self) -> f64 {
        self.absorbed_error
    }

    pub fn absorbed_correct(&self) -> f64 {
        self.absorbed_correct
    }

    /// Active plus absorbed mass; one at every step, up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.active_mass() + self.absorbed_error + self.absorbed_correct
    }

    /// True once every state has fixed its k votes. Structurally certain
    /// by step `n + k - 1`, since `h <= n - 1` and unfixed states keep
    /// `i - h <= k - 1`.
    pub fn settled(&self) -> bool {
        self.step >= self.n + self.k - 1 || self.active_mass() == 0.0
    }
}

fn check_k(data: &LabeledDataset, k: usize) -> Result<(), KnnError> {
    if k.is_multiple_of(2) || k == 0 {
        return Err(KnnError::EvenK(k));
    }
    if k > data.r_train() {
        return Err(KnnError::KTooLarge {
            k,
            r: data.r_train(),
        });
    }
    Ok(())
}

/// Probability that the k-NN classifier trained on the non-holdout points
/// misclassifies point `q`, over a uniformly random holdout of size `n`
/// containing `q`.
pub fn per_example_misclassification_probability(
    data: &LabeledDataset,
    q: usize,
    k: usize,
) -> Result<f64, KnnError> {
    check_k(data, k)?;
    let order = neighbor_ordering(data, q)?;
    let mut dp = SplitDpState::new(data.r_train(), data.n_holdout(), k);
    for &neighbor in &order {
        if dp.settled() {
            break;
        }
        dp.advance(data.label(neighbor) != data.label(q));
    }
    debug_assert!((dp.total_mass() - 1.0).abs() < 1e-12);
    debug_assert!(dp.active_mass() == 0.0);
    Ok(dp.absorbed_error())
}

/// Exact average holdout error rate of the k-NN Gibbs classifier over all
/// `C(r+n, n)` train/holdout splits: the mean over points of
/// [`per_example_misclassification_probability`], accumulated in index
/// order.
pub fn gibbs_average_holdout_error(data: &LabeledDataset, k: usize) -> Result<f64, KnnError> {
    let mut total = 0.0;
    for q in 0..data.len() {
        total += per_example_misclassification_probability(data, q, k)?;
    }
    Ok(total / data.len() as f64)
}

/// Split-enumeration oracle: walks every size-n holdout subset, trains the
/// k-NN classifier on the complement (same distance and tie rules), and
/// averages the per-split holdout error rates. Capped by `C(r+n, n) <=
/// cap`.
pub fn brute_force_average_holdout_error(data: &LabeledDataset, k: usize) -> Result<f64, KnnError> {
    brute_force_average_holdout_error_with_cap(data, k, DEFAULT_SPLIT_CAP)
}

/// [`brute_force_average_holdout_error`] with an explicit cap.
pub fn brute_force_average_holdout_error_with_cap(
    data: &LabeledDataset,
    k: usize,
    cap: u64,
) -> Result<f64, KnnError> {
    check_k(data, k)?;
    let total = data.len();
    let n = data.n_holdout();
    let splits = binomial_coefficient(total as u128, n as u128);
    if splits > cap as u128 {
        return Err(KnnError::SplitCapExceeded { splits, cap });
    }

    let orderings: Vec<Vec<usize>> = (0..total)
        .map(|q| neighbor_ordering(data, q))
        .collect::<Result<_, _>>()?;

    let mut in_holdout = vec![false; total];
    let mut holdout: Vec<usize> = (0..n).collect();
    let mut error_sum = 0.0;
    let mut split_count = 0u64;
    loop {
        for flag in in_holdout.iter_mut() {
            *flag = false;
        }
        for &q in &holdout {
            in_holdout[q] = true;
        }
        let mut wrong = 0usize;
        for &q in &holdout {
            let mut votes_wrong = 0usize;
            let mut votes = 0usize;
            for &neighbor in &orderings[q] {
                if in_holdout[neighbor] {
                    continue;
                }
                votes += 1;
                if data.label(neighbor) != data.label(q) {
                    votes_wrong += 1;
                }
                if votes == k {
                    break;
                }
            }
            if 2 * votes_wrong > k {
                wrong += 1;
            }
        }
        error_sum += wrong as f64 / n as f64;
        split_count += 1;
        if !next_combination(&mut holdout, total) {
            break;
        }
    }
    Ok(error_sum / split_count as f64)
}

fn binomial_coefficient(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        result = result.saturating_mul(n - k + i);
        result /= i;
    }
    result
}

/// Advances a sorted index combination to its lexicographic successor.
fn next_combination(combo: &mut [usize], total: usize) -> bool {
    let k = combo.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        if combo[pos] < total - k + pos {
            combo[pos] += 1;
            for later in pos + 1..k {
                combo[later] = combo[later - 1] + 1;
            }
            return true;
        }
    }
    false
}
