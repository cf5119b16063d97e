//! Exact squared Euclidean distance transform on a regular grid.
//!
//! Two separable passes of the lower-envelope-of-parabolas algorithm
//! (Felzenszwalb & Huttenlocher): columns first, then rows. Distances are in
//! grid units; all intermediate values are integers stored exactly in `f64`.

pub(crate) const INF: f64 = 1e20;

/// Squared distance from every cell to the nearest cell with `mask == true`.
/// Cells with no feature anywhere get a value `>= INF`.
pub(crate) fn squared_edt(mask: &[bool], nx: usize, ny: usize) -> Vec<f64> {
    debug_assert_eq!(mask.len(), nx * ny);
    let mut grid: Vec<f64> = mask.iter().map(|&m| if m { 0.0 } else { INF }).collect();
    let n = nx.max(ny);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];

    // layout is row-major with index j * nx + i
    for i in 0..nx {
        for j in 0..ny {
            f[j] = grid[j * nx + i];
        }
        transform_1d(&f[..ny], &mut d[..ny], &mut v, &mut z);
        for j in 0..ny {
            grid[j * nx + i] = d[j];
        }
    }
    for j in 0..ny {
        let row = &mut grid[j * nx..(j + 1) * nx];
        f[..nx].copy_from_slice(row);
        transform_1d(&f[..nx], &mut d[..nx], &mut v, &mut z);
        row.copy_from_slice(&d[..nx]);
    }
    grid
}

fn transform_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let intersect = |p: usize| ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
        let mut s = intersect(v[k]);
        // z[0] = -inf terminates the loop
        while s <= z[k] {
            k -= 1;
            s = intersect(v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *out = dq * dq + f[p];
    }
}
