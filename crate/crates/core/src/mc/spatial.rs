// Uniform bucket grid for nearest-neighbour queries inside a square window.

pub(crate) type Point = [f64; 2];

pub(crate) struct GridIndex {
    origin: f64,
    cell: f64,
    side: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
    points: Vec<Point>,
}

impl GridIndex {
    /// Indexes `points`, all lying in `[-half_width, half_width]²`.
    pub(crate) fn new(points: Vec<Point>, half_width: f64) -> Self {
        let n = points.len().max(1);
        // About two points per bucket.
        let side = ((n as f64 / 2.0).sqrt().ceil() as usize).clamp(1, 4096);
        let cell = 2.0 * half_width / side as f64;
        let origin = -half_width;
        let bucket = |p: &Point| {
            let ix = (((p[0] - origin) / cell) as usize).min(side - 1);
            let iy = (((p[1] - origin) / cell) as usize).min(side - 1);
            iy * side + ix
        };
        let mut counts = vec![0u32; side * side + 1];
        for p in &points {
            counts[bucket(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let b = bucket(p);
            items[fill[b] as usize] = i as u32;
            fill[b] += 1;
        }
        Self { origin, cell, side, starts: counts, items, points }
    }

    /// Index of the nearest indexed point, `None` if the index is empty.
    pub(crate) fn nearest(&self, q: Point) -> Option<u32> {
        if self.points.is_empty() {
            return None;
        }
        let side = self.side as isize;
        let cx = (((q[0] - self.origin) / self.cell).floor() as isize).clamp(0, side - 1);
        let cy = (((q[1] - self.origin) / self.cell).floor() as isize).clamp(0, side - 1);
        let mut best = (f64::INFINITY, u32::MAX);
        for ring in 0..=side {
            // Every point outside the rings searched so far is at least this far away.
            let reach = (ring as f64 - 1.0).max(0.0) * self.cell;
            if best.0 < reach * reach {
                break;
            }
            for iy in (cy - ring).max(0)..=(cy + ring).min(side - 1) {
                let on_edge_row = iy == cy - ring || iy == cy + ring;
                let step = if on_edge_row { 1 } else { (2 * ring).max(1) };
                let mut ix = cx - ring;
                while ix <= cx + ring {
                    if (0..side).contains(&ix) {
                        let b = iy as usize * self.side + ix as usize;
                        for &i in &self.items[self.starts[b] as usize..self.starts[b + 1] as usize] {
                            let p = self.points[i as usize];
                            let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                            if d2 < best.0 || (d2 == best.0 && i < best.1) {
                                best = (d2, i);
                            }
                        }
                    }
                    ix += step;
                }
            }
        }
        Some(best.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 7, 300] {
            let pts: Vec<Point> = (0..n).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
            let idx = GridIndex::new(pts.clone(), 1.0);
            for _ in 0..500 {
                let q = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let d2 = |p: &Point| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                let brute = (0..n).min_by(|&a, &b| d2(&pts[a]).total_cmp(&d2(&pts[b]))).unwrap();
                let got = idx.nearest(q).unwrap() as usize;
                assert_eq!(d2(&pts[got]), d2(&pts[brute]));
            }
        }
    }

    #[test]
    fn empty_index() {
        assert_eq!(GridIndex::new(Vec::new(), 1.0).nearest([0.0, 0.0]), None);
    }
}
