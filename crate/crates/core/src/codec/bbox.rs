use std::fmt;

use serde::{Deserialize, Serialize};

use super::CodecError;

/// Axis-aligned pixel rectangle, half-open: `[x, x + w) × [y, y + h)`,
/// origin at the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl BBox {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        BBox { x, y, w, h }
    }

    /// Box covering a whole `width × height` frame.
    pub fn full(width: usize, height: usize) -> Self {
        BBox::new(0, 0, width as u32, height as u32)
    }

    pub fn area(&self) -> u64 {
        u64::from(self.w) * u64::from(self.h)
    }

    /// Exclusive right edge.
    pub fn right(&self) -> u64 {
        u64::from(self.x) + u64::from(self.w)
    }

    /// Exclusive bottom edge.
    pub fn bottom(&self) -> u64 {
        u64::from(self.y) + u64::from(self.h)
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if self.w == 0 || self.h == 0 {
            return Err(CodecError::ZeroAreaBBox { bbox: *self });
        }
        Ok(())
    }

    /// Checks positive area and containment in a `width × height` frame.
    pub fn validate_within(&self, width: usize, height: usize) -> Result<(), CodecError> {
        self.validate()?;
        if self.right() > width as u64 || self.bottom() > height as u64 {
            return Err(CodecError::BBoxOutOfBounds { bbox: *self, width, height });
        }
        Ok(())
    }

    pub fn intersection_area(&self, other: &BBox) -> u64 {
        let left = self.x.max(other.x) as u64;
        let top = self.y.max(other.y) as u64;
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        right.saturating_sub(left) * bottom.saturating_sub(top)
    }

    pub fn translated(&self, dx: u32, dy: u32) -> BBox {
        BBox::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

impl fmt::Display for BBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, y={}, w={}, h={})", self.x, self.y, self.w, self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment() {
        assert!(BBox::new(0, 0, 4, 4).validate_within(4, 4).is_ok());
        assert!(BBox::new(1, 0, 4, 4).validate_within(4, 4).is_err());
        assert!(BBox::new(0, 0, 0, 4).validate_within(4, 4).is_err());
        assert!(BBox::new(u32::MAX, 0, 2, 1).validate_within(4, 4).is_err());
    }

    #[test]
    fn intersection() {
        let a = BBox::new(0, 0, 2, 2);
        assert_eq!(a.intersection_area(&BBox::new(1, 0, 2, 2)), 2);
        assert_eq!(a.intersection_area(&BBox::new(2, 0, 2, 2)), 0);
        assert_eq!(a.intersection_area(&a), 4);
    }
}
