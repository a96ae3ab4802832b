use alloc::vec::Vec;

/// A stack of per-class `H x W` planes keyed by class id.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPlanes {
    width: usize,
    height: usize,
    ids: Vec<u16>,
    data: Vec<f64>,
}

impl ClassPlanes {
    pub(crate) fn with_capacity(width: usize, height: usize, classes: usize) -> Self {
        Self {
            width,
            height,
            ids: Vec::with_capacity(classes),
            data: Vec::with_capacity(classes * width * height),
        }
    }

    pub(crate) fn push(&mut self, id: u16, plane: impl IntoIterator<Item = f64>) {
        let before = self.data.len();
        self.data.extend(plane);
        debug_assert_eq!(self.data.len() - before, self.width * self.height);
        self.ids.push(id);
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Class ids in plane order.
    pub fn ids(&self) -> &[u16] {
        &self.ids
    }

    pub fn plane(&self, id: u16) -> Option<&[f64]> {
        let c = self.ids.iter().position(|&i| i == id)?;
        let n = self.width * self.height;
        Some(&self.data[c * n..(c + 1) * n])
    }

    pub fn planes(&self) -> impl Iterator<Item = (u16, &[f64])> {
        let n = (self.width * self.height).max(1);
        self.ids.iter().copied().zip(self.data.chunks(n))
    }
}
