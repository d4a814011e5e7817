use statrs::function::gamma::ln_gamma;

use super::dataset::Dataset;

/// Joint counts of a child column against its parent configurations:
/// `counts[config * r + value]`, configs mixed-radix over `parents` in the
/// given order (last fastest).
pub fn family_counts(data: &Dataset, child: usize, parents: &[usize]) -> Vec<u64> {
    let r = data.cardinality(child);
    let q: usize = parents.iter().map(|&p| data.cardinality(p)).product();
    let mut counts = vec![0u64; q * r];
    let child_col = data.column_values(child);
    let parent_cols: Vec<(&[u32], usize)> = parents
        .iter()
        .map(|&p| (data.column_values(p), data.cardinality(p)))
        .collect();
    for (row, &x) in child_col.iter().enumerate() {
        let mut config = 0usize;
        for &(col, card) in &parent_cols {
            config = config * card + col[row] as usize;
        }
        counts[config * r + x as usize] += 1;
    }
    counts
}

/// Log Dirichlet-multinomial marginal likelihood of `child` given `parents`,
/// with the same pseudo-count `alpha` in every cell.
pub fn family_score(data: &Dataset, child: usize, parents: &[usize], alpha: f64) -> f64 {
    let r = data.cardinality(child);
    let counts = family_counts(data, child, parents);
    let row_prior = alpha * r as f64;
    let ln_gamma_alpha = ln_gamma(alpha);
    let mut score = 0.0;
    for config in counts.chunks(r) {
        let n: u64 = config.iter().sum();
        if n == 0 {
            continue;
        }
        score += ln_gamma(row_prior) - ln_gamma(row_prior + n as f64);
        for &c in config {
            if c > 0 {
                score += ln_gamma(alpha + c as f64) - ln_gamma_alpha;
            }
        }
    }
    score
}

/// Sum of family scores over a whole structure (`parents[v]` per column).
pub fn network_score(data: &Dataset, parents: &[Vec<usize>], alpha: f64) -> f64 {
    parents
        .iter()
        .enumerate()
        .map(|(child, ps)| family_score(data, child, ps, alpha))
        .sum()
}

/// Posterior-mean CPT rows: (count(x,u) + alpha) / (count(u) + alpha·|S|).
pub fn estimate_cpt(data: &Dataset, child: usize, parents: &[usize], alpha: f64) -> Vec<Vec<f64>> {
    let r = data.cardinality(child);
    family_counts(data, child, parents)
        .chunks(r)
        .map(|config| {
            let n: u64 = config.iter().sum();
            let denom = n as f64 + alpha * r as f64;
            config.iter().map(|&c| (c as f64 + alpha) / denom).collect()
        })
        .collect()
}

/// CPT rows for every column of a structure.
pub fn estimate_cpts(data: &Dataset, parents: &[Vec<usize>], alpha: f64) -> Vec<Vec<Vec<f64>>> {
    parents
        .iter()
        .enumerate()
        .map(|(child, ps)| estimate_cpt(data, child, ps, alpha))
        .collect()
}
