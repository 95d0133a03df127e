use super::render::Mask;
use super::DynamicsError;

/// A dyadic square of `side x side` pixels with top-left pixel `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhitneySquare {
    pub i: usize,
    pub j: usize,
    pub side: usize,
}

/// Stand-in for "no feature" in the distance transform; finite so the
/// parabola intersections stay ordered.
const FAR: f64 = 1e20;

/// Exact squared Euclidean distance transform along one line (lower envelope
/// of parabolas); `f` holds 0 on feature pixels and [`FAR`] elsewhere.
fn edt_line(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let inter = |q: usize, p: usize| ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s = inter(q, v[k]);
        while s <= z[k] {
            k -= 1;
            s = inter(q, v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        *o = (q as f64 - v[k] as f64).powi(2) + f[v[k]];
    }
}

/// Distance (in pixels, center to center) from every pixel of a `p x p`
/// frame to the nearest pixel outside the set; everything beyond the mask
/// counts as outside.
fn distance_to_complement(mask: &Mask, p: usize) -> Vec<f64> {
    // one ring of complement around the frame
    let w = p + 2;
    let mut g = vec![0.0; w * w];
    for j in 0..mask.ny {
        for i in 0..mask.nx {
            if mask.get(i, j) {
                g[(j + 1) * w + i + 1] = FAR;
            }
        }
    }
    let mut v = vec![0usize; w];
    let mut z = vec![0.0; w + 1];
    let mut col = vec![0.0; w];
    let mut out = vec![0.0; w];
    for i in 0..w {
        for j in 0..w {
            col[j] = g[j * w + i];
        }
        edt_line(&col, &mut out, &mut v, &mut z);
        for j in 0..w {
            g[j * w + i] = out[j];
        }
    }
    let mut dist = vec![0.0; p * p];
    for j in 0..p {
        edt_line(&g[(j + 1) * w..(j + 2) * w], &mut out, &mut v, &mut z);
        for i in 0..p {
            dist[j * p + i] = out[i + 1].sqrt();
        }
    }
    dist
}

/// Maximal dyadic squares inside the masked open set whose side is at most
/// their distance to the complement. Distances are measured between pixel
/// squares, so squares touching the complement never qualify and the one-pixel
/// boundary layer is left uncovered. Squares come out in depth-first order.
pub fn whitney_squares(mask: &Mask) -> Result<Vec<WhitneySquare>, DynamicsError> {
    if mask.count() == 0 {
        return Err(DynamicsError::EmptySet);
    }
    let p = mask.nx.max(mask.ny).next_power_of_two();
    let dist = distance_to_complement(mask, p);
    // min-pyramid of center distances; 0 marks pixels outside the set
    let mut levels = vec![dist];
    let mut size = p;
    while size > 1 {
        let prev = levels.last().expect("nonempty");
        let half = size / 2;
        let mut next = vec![0.0; half * half];
        for b in 0..half {
            for a in 0..half {
                let at = |i: usize, j: usize| prev[j * size + i];
                next[b * half + a] = at(2 * a, 2 * b)
                    .min(at(2 * a + 1, 2 * b))
                    .min(at(2 * a, 2 * b + 1))
                    .min(at(2 * a + 1, 2 * b + 1));
            }
        }
        levels.push(next);
        size = half;
    }
    // occupancy pyramid over the padded frame
    let mut occ = vec![false; p * p];
    for j in 0..mask.ny {
        for i in 0..mask.nx {
            occ[j * p + i] = mask.get(i, j);
        }
    }
    let mut any = vec![occ];
    let mut size = p;
    while size > 1 {
        let prev = any.last().expect("nonempty");
        let half = size / 2;
        let mut next = vec![false; half * half];
        for b in 0..half {
            for a in 0..half {
                let at = |i: usize, j: usize| prev[j * size + i];
                next[b * half + a] = at(2 * a, 2 * b) || at(2 * a + 1, 2 * b) || at(2 * a, 2 * b + 1) || at(2 * a + 1, 2 * b + 1);
            }
        }
        any.push(next);
        size = half;
    }
    let top = levels.len() - 1;
    let mut out = Vec::new();
    let mut stack = vec![(top, 0usize, 0usize)];
    while let Some((lv, a, b)) = stack.pop() {
        let n = p >> lv;
        if !any[lv][b * n + a] {
            continue;
        }
        let side = 1usize << lv;
        let gap = levels[lv][b * n + a] - 1.0;
        if gap >= side as f64 {
            out.push(WhitneySquare { i: a * side, j: b * side, side });
            continue;
        }
        if lv == 0 {
            continue;
        }
        for (da, db) in [(1, 1), (0, 1), (1, 0), (0, 0)] {
            stack.push((lv - 1, 2 * a + da, 2 * b + db));
        }
    }
    Ok(out)
}

/// `Σ diam(Q)^t` over [`whitney_squares`], in plane units.
pub fn whitney_tsum(open_mask: &Mask, t: f64) -> Result<f64, DynamicsError> {
    if !(1.0..=2.0).contains(&t) {
        return Err(DynamicsError::BadArguments(format!("t = {t} outside [1, 2]")));
    }
    let h = open_mask.pixel_size();
    let squares = whitney_squares(open_mask)?;
    Ok(squares.iter().map(|q| (std::f64::consts::SQRT_2 * q.side as f64 * h).powf(t)).sum())
}
