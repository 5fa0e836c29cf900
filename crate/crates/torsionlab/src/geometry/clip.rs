//! Clipping of convex polygons against affine half-spaces.

/// Keep the part of the convex polygon `verts` where the affine function with
/// vertex values `g` is non-negative.  Each vertex carries `K` affine
/// attributes (coordinates first), interpolated linearly along cut edges.
pub fn clip_affine<const K: usize>(verts: &[[f64; K]], g: &[f64]) -> (Vec<[f64; K]>, Vec<f64>) {
    let n = verts.len();
    let mut out = Vec::with_capacity(n + 2);
    let mut out_g = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (gi, gj) = (g[i], g[j]);
        if gi >= 0.0 {
            out.push(verts[i]);
            out_g.push(gi);
        }
        if (gi >= 0.0) != (gj >= 0.0) {
            let t = gi / (gi - gj);
            let mut p = [0.0; K];
            for k in 0..K {
                p[k] = verts[i][k] + t * (verts[j][k] - verts[i][k]);
            }
            out.push(p);
            out_g.push(0.0);
        }
    }
    (out, out_g)
}

/// Clip a convex polygon of points by `{x : a·x + c ≥ 0}`.
pub fn clip_halfplane(poly: &[[f64; 2]], a: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let g: Vec<f64> = poly.iter().map(|p| a[0] * p[0] + a[1] * p[1] + c).collect();
    clip_affine(poly, &g).0
}

/// Shoelace signed area.
pub fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        s += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square_by_diagonal() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let half = clip_halfplane(&sq, [-1.0, -1.0], 1.0);
        assert!((signed_area(&half) - 0.5).abs() < 1e-15);
        let none = clip_halfplane(&sq, [1.0, 0.0], -2.0);
        assert!(none.is_empty());
    }

    #[test]
    fn attributes_follow_the_cut() {
        let tri = [[0.0, 0.0, 0.0], [2.0, 0.0, 2.0], [0.0, 2.0, 0.0]];
        let g: Vec<f64> = tri.iter().map(|p| 1.0 - p[0]).collect();
        let (cut, _) = clip_affine(&tri, &g);
        for p in &cut {
            assert!((p[2] - p[0]).abs() < 1e-15);
        }
    }
}
