//! Shared oracles, independent of the library's evaluation path.

use teamsel::DiscreteRv;

/// Expected top-`h` sum by full product-space enumeration, including the
/// residual zero outcome of every variable. Exponential in pool size; use
/// only on small pools.
pub fn enumerate_expected_top_h(rvs: &[&DiscreteRv], h: usize) -> f64 {
    let atoms: Vec<Vec<(f64, f64)>> = rvs
        .iter()
        .map(|rv| {
            let mut a: Vec<(f64, f64)> = rv
                .values()
                .iter()
                .zip(rv.masses())
                .map(|(&v, &m)| (v, m))
                .collect();
            let residual = 1.0 - rv.total_mass();
            if residual > 0.0 {
                a.push((0.0, residual));
            }
            a
        })
        .collect();
    let mut total = 0.0;
    let mut point = vec![0.0f64; rvs.len()];
    walk(&atoms, 0, 1.0, &mut point, h, &mut total);
    total
}

fn walk(
    atoms: &[Vec<(f64, f64)>],
    depth: usize,
    prob: f64,
    point: &mut Vec<f64>,
    h: usize,
    total: &mut f64,
) {
    if depth == atoms.len() {
        let mut vals = point.clone();
        vals.sort_by(|a, b| b.total_cmp(a));
        *total += prob * vals.iter().take(h).sum::<f64>();
        return;
    }
    for &(v, m) in &atoms[depth] {
        point[depth] = v;
        walk(atoms, depth + 1, prob * m, point, h, total);
    }
}
