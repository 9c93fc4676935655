use super::dataset::{Dataset, WeightVector};
use crate::error::{Error, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default minimum number of (bootstrap) samples per leaf.
pub const DEFAULT_MIN_LEAF: usize = 5;
/// Default maximum tree depth.
pub const DEFAULT_MAX_DEPTH: usize = 16;
/// Version tag written into serialized forests.
pub const FOREST_SCHEMA_VERSION: u32 = 1;

/// A node of a regression tree. Queries with `γ[feature] ≤ threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { indices: Vec<usize> },
}

/// A fitted regression tree over `n_samples` training indices. Leaves store
/// training indices with multiplicity when the tree was grown on a bootstrap
/// sample. The root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub n_samples: usize,
    pub d_gamma: usize,
    pub nodes: Vec<Node>,
}

impl TreeModel {
    /// Training indices in the leaf that `query` is routed to.
    pub fn leaf_of(&self, query: &[f64]) -> &[usize] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Split { feature, threshold, left, right } => {
                    at = if query[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf { indices } => return indices,
            }
        }
    }

    /// All leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&[usize]> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { indices } => Some(indices.as_slice()),
                Node::Split { .. } => None,
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    fn leaf_mass(&self, query: &[f64], mass: &mut [f64], scale: f64) {
        let leaf = self.leaf_of(query);
        let share = scale / leaf.len() as f64;
        for &i in leaf {
            mass[i] += share;
        }
    }
}

/// Best split of `rows` (training indices, possibly repeated) among
/// `features`, as `(feature, threshold, left, right)`; `None` if no legal
/// split lowers the summed squared deviation of the responses.
fn best_split(
    data: &Dataset,
    rows: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<(usize, f64, Vec<usize>, Vec<usize>)> {
    let n = rows.len();
    let dx = data.d_xi();
    let mut mean = vec![0.0; dx];
    for &i in rows {
        for (m, v) in mean.iter_mut().zip(&data.xis[i]) {
            *m += v / n as f64;
        }
    }
    // Responses centered at the node mean keep the prefix-sum formula stable.
    let centered: Vec<Vec<f64>> =
        rows.iter().map(|&i| data.xis[i].iter().zip(&mean).map(|(v, m)| v - m).collect()).collect();
    let total_sq: f64 = centered.iter().flatten().map(|v| v * v).sum();
    if total_sq <= 0.0 {
        return None;
    }
    let tol = 1e-12 * total_sq;
    let mut best: Option<(f64, usize, usize, Vec<usize>)> = None;
    for &f in features {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| data.gammas[rows[a]][f].total_cmp(&data.gammas[rows[b]][f]).then(a.cmp(&b)));
        let mut sum_left = vec![0.0; dx];
        let mut sq_left = 0.0;
        for s in 1..n {
            let r = &centered[order[s - 1]];
            for (a, v) in sum_left.iter_mut().zip(r) {
                *a += v;
            }
            sq_left += r.iter().map(|v| v * v).sum::<f64>();
            if s < min_leaf || n - s < min_leaf {
                continue;
            }
            let lo = data.gammas[rows[order[s - 1]]][f];
            let hi = data.gammas[rows[order[s]]][f];
            if lo >= hi {
                continue;
            }
            // The right-hand sum is the negated left sum because responses are centered.
            let norm_left: f64 = sum_left.iter().map(|v| v * v).sum();
            let sse_left = sq_left - norm_left / s as f64;
            let sse_right = (total_sq - sq_left) - norm_left / (n - s) as f64;
            let gain = total_sq - sse_left - sse_right;
            if gain > tol && best.as_ref().is_none_or(|b| gain > b.0) {
                best = Some((gain, f, s, order.clone()));
            }
        }
    }
    let (_, f, s, order) = best?;
    let lo = data.gammas[rows[order[s - 1]]][f];
    let hi = data.gammas[rows[order[s]]][f];
    let mut threshold = 0.5 * (lo + hi);
    if threshold >= hi {
        threshold = lo;
    }
    let left = order[..s].iter().map(|&a| rows[a]).collect();
    let right = order[s..].iter().map(|&a| rows[a]).collect();
    Some((f, threshold, left, right))
}

struct Grower<'a, R: Rng> {
    data: &'a Dataset,
    min_leaf: usize,
    max_depth: usize,
    feature_draw: Option<(&'a mut R, usize)>,
    nodes: Vec<Node>,
}

impl<R: Rng> Grower<'_, R> {
    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { indices: Vec::new() });
        let split = if depth >= self.max_depth || rows.len() < 2 * self.min_leaf {
            None
        } else {
            let d = self.data.d_gamma();
            let features: Vec<usize> = match &mut self.feature_draw {
                Some((rng, mtry)) => {
                    let mut f = sample(*rng, d, *mtry).into_vec();
                    f.sort_unstable();
                    f
                }
                None => (0..d).collect(),
            };
            best_split(self.data, &rows, &features, self.min_leaf)
        };
        match split {
            None => {
                let mut indices = rows;
                indices.sort_unstable();
                self.nodes[at] = Node::Leaf { indices };
            }
            Some((feature, threshold, l, r)) => {
                let left = self.grow(l, depth + 1);
                let right = self.grow(r, depth + 1);
                self.nodes[at] = Node::Split { feature, threshold, left, right };
            }
        }
        at
    }
}

fn check_tree_params(min_leaf: usize, max_depth: usize) -> Result<()> {
    if min_leaf == 0 {
        return Err(Error::InvalidParameter("min_leaf must be at least 1".into()));
    }
    if max_depth == 0 {
        return Err(Error::InvalidParameter("max_depth must be at least 1".into()));
    }
    Ok(())
}

/// Grows a regression tree from side information to sample paths by greedy
/// exhaustive search over features and midpoints between consecutive
/// distinct values, minimizing the total squared deviation of all response
/// coordinates from their leaf means.
pub fn fit_cart(data: &Dataset, min_leaf: usize, max_depth: usize) -> Result<TreeModel> {
    check_tree_params(min_leaf, max_depth)?;
    let mut g: Grower<'_, ChaCha8Rng> = Grower { data, min_leaf, max_depth, feature_draw: None, nodes: Vec::new() };
    g.grow((0..data.len()).collect(), 0);
    Ok(TreeModel { n_samples: data.len(), d_gamma: data.d_gamma(), nodes: g.nodes })
}

/// Weight `1/|leaf|` on every training index in the leaf containing `query`.
pub fn cart_weights(tree: &TreeModel, query: &[f64]) -> Result<WeightVector> {
    check_tree_query(tree.d_gamma, query)?;
    let mut mass = vec![0.0; tree.n_samples];
    tree.leaf_mass(query, &mut mass, 1.0);
    WeightVector::from_unnormalized(mass)
}

fn check_tree_query(d_gamma: usize, query: &[f64]) -> Result<()> {
    if query.len() != d_gamma {
        return Err(Error::InvalidParameter(format!(
            "query has dimension {} but the model was fitted on {d_gamma}",
            query.len()
        )));
    }
    Ok(())
}

/// Random-forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub min_leaf: usize,
    pub max_depth: usize,
    pub mtry: usize,
    /// Grow each tree on a size-`N` bootstrap sample; when false every tree
    /// sees the full dataset once.
    pub bootstrap: bool,
}

impl ForestParams {
    /// 100 bootstrapped trees, `mtry = max(1, ⌈d_γ/3⌉)`, default leaf size and depth.
    pub fn defaults(d_gamma: usize) -> Self {
        Self {
            n_trees: 100,
            min_leaf: DEFAULT_MIN_LEAF,
            max_depth: DEFAULT_MAX_DEPTH,
            mtry: d_gamma.div_ceil(3).max(1),
            bootstrap: true,
        }
    }
}

/// A fitted forest with the bootstrap sample behind each tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub version: u32,
    pub seed: u64,
    pub params: ForestParams,
    pub trees: Vec<TreeModel>,
    pub bootstrap_indices: Vec<Vec<usize>>,
}

impl ForestModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a forest document, rejecting unknown schema versions and
    /// structurally invalid trees.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: ForestModel = serde_json::from_str(text)?;
        if f.version != FOREST_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "forest schema version {} is not supported (expected {FOREST_SCHEMA_VERSION})",
                f.version
            )));
        }
        if f.trees.is_empty() || f.trees.len() != f.bootstrap_indices.len() {
            return Err(Error::Parse("forest needs one bootstrap list per tree and at least one tree".into()));
        }
        for t in &f.trees {
            let n = t.nodes.len();
            let ok = n > 0
                && t.nodes.iter().all(|node| match node {
                    Node::Split { feature, left, right, .. } => *feature < t.d_gamma && *left < n && *right < n,
                    Node::Leaf { indices } => !indices.is_empty() && indices.iter().all(|&i| i < t.n_samples),
                });
            if !ok {
                return Err(Error::Parse("malformed tree in forest document".into()));
            }
        }
        Ok(f)
    }
}

/// Grows `params.n_trees` trees, each on a with-replacement bootstrap of size
/// `N` (unless disabled) and with a fresh uniformly drawn subset of `mtry`
/// features at every split. The result depends only on the inputs and `seed`.
pub fn fit_forest(data: &Dataset, params: ForestParams, seed: u64) -> Result<ForestModel> {
    check_tree_params(params.min_leaf, params.max_depth)?;
    if params.n_trees == 0 {
        return Err(Error::InvalidParameter("a forest needs at least one tree".into()));
    }
    if params.mtry == 0 || params.mtry > data.d_gamma() {
        return Err(Error::InvalidParameter(format!("mtry = {} must lie in 1..={}", params.mtry, data.d_gamma())));
    }
    let n = data.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = Vec::with_capacity(params.n_trees);
    let mut bootstrap_indices = Vec::with_capacity(params.n_trees);
    for _ in 0..params.n_trees {
        let rows: Vec<usize> =
            if params.bootstrap { (0..n).map(|_| rng.random_range(0..n)).collect() } else { (0..n).collect() };
        bootstrap_indices.push(rows.clone());
        let mut g = Grower {
            data,
            min_leaf: params.min_leaf,
            max_depth: params.max_depth,
            feature_draw: Some((&mut rng, params.mtry)),
            nodes: Vec::new(),
        };
        g.grow(rows, 0);
        trees.push(TreeModel { n_samples: n, d_gamma: data.d_gamma(), nodes: g.nodes });
    }
    Ok(ForestModel { version: FOREST_SCHEMA_VERSION, seed, params, trees, bootstrap_indices })
}

/// Average over trees of the per-tree leaf weights, counting bootstrap
/// multiplicity inside each leaf.
pub fn rf_weights(forest: &ForestModel, query: &[f64]) -> Result<WeightVector> {
    let first = forest.trees.first().ok_or_else(|| Error::InvalidParameter("empty forest".into()))?;
    check_tree_query(first.d_gamma, query)?;
    let mut mass = vec![0.0; first.n_samples];
    let scale = 1.0 / forest.trees.len() as f64;
    for t in &forest.trees {
        t.leaf_mass(query, &mut mass, scale);
    }
    WeightVector::from_unnormalized(mass)
}
