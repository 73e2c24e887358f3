use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Tableau;
use crate::algebra::QMatrix;
use crate::error::{Error, Result};

/// Shapes of the leading submatrices of sizes `m_1 + … + m_h`: row `r` of
/// the h-th shape counts the Jordan blocks longer than `r`.
pub fn jordan_chain(x: &QMatrix, m: &[usize]) -> Result<Vec<Vec<usize>>> {
    let total: usize = m.iter().sum();
    if x.rows() != total || x.cols() != total {
        return Err(Error::invalid(format!(
            "matrix is {}x{}, expected {total}x{total}",
            x.rows(),
            x.cols()
        )));
    }
    let mut chain = Vec::with_capacity(m.len());
    let mut size = 0;
    for (h, &mh) in m.iter().enumerate() {
        size += mh;
        let y = x.leading(size);
        let mut ranks = vec![size];
        let mut p = y.clone();
        loop {
            let r = p.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            if ranks.len() > size + 1 {
                return Err(Error::invalid(format!(
                    "leading {size}x{size} submatrix (h = {}) is not nilpotent",
                    h + 1
                )));
            }
            p = p.mul(&y);
        }
        let shape: Vec<usize> = ranks
            .windows(2)
            .map(|w| w[0] - w[1])
            .filter(|&d| d > 0)
            .collect();
        chain.push(shape);
    }
    Ok(chain)
}

/// Labels a nilpotent matrix by the chain of Jordan types of its leading
/// block submatrices; letter `h` fills the boxes added at step `h`.
pub fn spaltenstein_label(x: &QMatrix, m: &[usize]) -> Result<Tableau> {
    let chain = jordan_chain(x, m)?;
    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for (h, shape) in chain.iter().enumerate() {
        if rows.len() < shape.len() {
            rows.resize(shape.len(), Vec::new());
        }
        for (r, &len) in shape.iter().enumerate() {
            let before = prev.get(r).copied().unwrap_or(0);
            match len.checked_sub(before) {
                Some(0) => {}
                Some(1) => rows[r].push(h as u16 + 1),
                _ => {
                    return Err(Error::invalid(format!(
                        "step {} of the Jordan chain is not a vertical strip",
                        h + 1
                    )))
                }
            }
        }
        prev = shape.clone();
    }
    Tableau::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn zero_matrix_is_one_row() {
        let t = spaltenstein_label(&QMatrix::zeros(2, 2), &[1, 1]).unwrap();
        assert_eq!(t.rows(), &[vec![1, 2]]);
    }

    #[test]
    fn base_point_gives_its_blocks() {
        // x_m for m = (2,2): two Jordan blocks of size 2
        let mut x = QMatrix::zeros(4, 4);
        x.set(0, 1, q(1));
        x.set(2, 3, q(1));
        let t = spaltenstein_label(&x, &[2, 2]).unwrap();
        assert_eq!(t.rows(), &[vec![1, 2], vec![1, 2]]);
    }

    #[test]
    fn non_nilpotent_rejected() {
        let mut x = QMatrix::zeros(2, 2);
        x.set(0, 0, q(1));
        assert!(spaltenstein_label(&x, &[1, 1]).is_err());
    }
}
