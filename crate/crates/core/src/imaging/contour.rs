use alloc::vec::Vec;

use super::BitMask;
use crate::grid::Grid;

/// Set pixels with at least one 4-neighbour outside the mask or the frame.
pub fn boundary(mask: &BitMask) -> BitMask {
    let (w, h) = mask.dims();
    Grid::from_fn(w, h, |x, y| {
        *mask.get(x, y)
            && (x == 0
                || y == 0
                || x + 1 == w
                || y + 1 == h
                || !*mask.get(x - 1, y)
                || !*mask.get(x + 1, y)
                || !*mask.get(x, y - 1)
                || !*mask.get(x, y + 1))
    })
}

// clockwise on screen, starting west
const DIRS: [(isize, isize); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn dir_index(dx: isize, dy: isize) -> usize {
    DIRS.iter()
        .position(|&d| d == (dx, dy))
        .expect("neighbouring offset")
}

/// Moore-neighbour trace of the outer contour of the component that owns the
/// first set pixel in raster order. Clockwise, starting at that pixel; empty
/// for an empty mask.
pub fn trace_outer_contour(mask: &BitMask) -> Vec<(usize, usize)> {
    let (w, h) = mask.dims();
    let Some(first) = mask.as_slice().iter().position(|&b| b) else {
        return Vec::new();
    };
    let start = ((first % w) as isize, (first / w) as isize);
    let set = |p: (isize, isize)| {
        p.0 >= 0
            && p.1 >= 0
            && (p.0 as usize) < w
            && (p.1 as usize) < h
            && *mask.get(p.0 as usize, p.1 as usize)
    };
    // one Moore step: sweep clockwise from the backtrack direction
    let step = |cur: (isize, isize), back: usize| {
        (1..=8).find_map(|k| {
            let e = (back + k) % 8;
            let p = (cur.0 + DIRS[e].0, cur.1 + DIRS[e].1);
            set(p).then(|| {
                let prev = DIRS[(e + 7) % 8];
                let b = (cur.0 + prev.0, cur.1 + prev.1);
                (p, dir_index(b.0 - p.0, b.1 - p.1))
            })
        })
    };
    let mut contour = alloc::vec![(start.0 as usize, start.1 as usize)];
    let Some(first_move) = step(start, 0) else {
        return contour; // isolated pixel
    };
    let mut state = first_move;
    let limit = 8 * w * h + 8;
    loop {
        let next = step(state.0, state.1).expect("traced pixel has a neighbour");
        if state.0 == start && next == first_move {
            return contour;
        }
        contour.push((state.0 .0 as usize, state.0 .1 as usize));
        state = next;
        assert!(contour.len() <= limit, "contour trace failed to close");
    }
}
