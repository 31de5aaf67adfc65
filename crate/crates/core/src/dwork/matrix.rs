//! Dense matrices over the tower, and the binary matrix dump.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::ExponentVector;
use crate::padic::{TowerElem, TowerParams};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub data: Vec<TowerElem>,
}

impl Mat {
    pub fn zeros(t: &TowerParams, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![t.zero(); rows * cols] }
    }

    pub fn identity(t: &TowerParams, n: usize) -> Self {
        let mut m = Self::zeros(t, n, n);
        for i in 0..n {
            m.data[i * n + i] = t.one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &TowerElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: TowerElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> TowerElem + Sync) -> Self {
        let data = (0..rows * cols).into_par_iter().map(|k| f(k / cols, k % cols)).collect();
        Mat { rows, cols, data }
    }

    pub fn mul(&self, t: &TowerParams, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let ot = o.transpose();
        Mat::from_fn(self.rows, o.cols, |r, c| {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let col = &ot.data[c * ot.cols..(c + 1) * ot.cols];
            t.dot(row.iter().zip(col).filter(|(x, y)| !t.is_zero(x) && !t.is_zero(y)))
        })
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn add(&self, t: &TowerParams, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(x, y)| t.add(x, y)).collect() }
    }

    pub fn sub(&self, t: &TowerParams, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(x, y)| t.sub(x, y)).collect() }
    }

    pub fn scale(&self, t: &TowerParams, k: &TowerElem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| t.mul(x, k)).collect() }
    }

    pub fn trace(&self, t: &TowerParams) -> TowerElem {
        (0..self.rows.min(self.cols)).fold(t.zero(), |acc, i| t.add(&acc, self.get(i, i)))
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_of_product(&self, t: &TowerParams, o: &Mat) -> TowerElem {
        assert_eq!((self.rows, self.cols), (o.cols, o.rows));
        let parts: Vec<TowerElem> = (0..self.rows)
            .into_par_iter()
            .map(|i| t.dot((0..self.cols).map(|k| (self.get(i, k), o.get(k, i)))))
            .collect();
        parts.iter().fold(t.zero(), |acc, x| t.add(&acc, x))
    }

    /// Minimum valuation in column `c` (capped at the precision).
    pub fn column_val(&self, t: &TowerParams, c: usize) -> Q {
        (0..self.rows).map(|r| t.val(self.get(r, c))).min().unwrap_or(Q::from_integer(t.prec as i64))
    }

    /// Embeds a block into a larger matrix.
    pub fn put_block(&mut self, t: &TowerParams, r0: usize, c0: usize, b: &Mat, sign: i64) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                let v = if sign < 0 { t.neg(b.get(r, c)) } else { b.get(r, c).clone() };
                self.set(r0 + r, c0 + c, v);
            }
        }
    }
}

const MAGIC: &[u8; 4] = b"DWZF";
const VERSION: u32 = 1;

/// Writes `basis`, weights, tower parameters and the coordinate data.
pub fn dump_matrix(out: &mut impl Write, t: &TowerParams, basis: &[(ExponentVector, Q)], m: &Mat) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    for v in [t.p, t.a as u64, t.prec as u64, basis.len() as u64, basis.first().map_or(0, |b| b.0.dim()) as u64] {
        out.write_all(&v.to_le_bytes())?;
    }
    for (u, w) in basis {
        for x in u.iter() {
            out.write_all(&x.to_le_bytes())?;
        }
        out.write_all(&w.numer().to_le_bytes())?;
        out.write_all(&w.denom().to_le_bytes())?;
    }
    out.write_all(&(m.rows as u64).to_le_bytes())?;
    out.write_all(&(m.cols as u64).to_le_bytes())?;
    for e in &m.data {
        for c in &e.c {
            out.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Parsed dump: `(p, a, prec, basis, matrix)`.
pub type Dump = (u64, usize, u32, Vec<(ExponentVector, Q)>, Mat);

pub fn load_matrix(input: &mut impl Read) -> Result<Dump> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::BadDump("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    input.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != VERSION {
        return Err(Error::BadDump("unsupported version".into()));
    }
    let mut rd = || -> Result<u64> {
        let mut b = [0u8; 8];
        input.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    };
    let (p, a, prec, nb, n) = (rd()?, rd()? as usize, rd()? as u32, rd()? as usize, rd()? as usize);
    let mut basis = Vec::with_capacity(nb);
    for _ in 0..nb {
        let u: Vec<i64> = (0..n).map(|_| rd().map(|x| x as i64)).collect::<Result<_>>()?;
        let (num, den) = (rd()? as i64, rd()? as i64);
        if den <= 0 {
            return Err(Error::BadDump("bad weight".into()));
        }
        basis.push((ExponentVector(u), Q::new(num, den)));
    }
    let (rows, cols) = (rd()? as usize, rd()? as usize);
    let dim = (p as usize - 1) * a;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(TowerElem { c: (0..dim).map(|_| rd()).collect::<Result<_>>()? });
    }
    Ok((p, a, prec, basis, Mat { rows, cols, data }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    #[test]
    fn product_and_traces() {
        let t = TowerParams::new(&make_field(3, 1).unwrap(), 6).unwrap();
        let a = Mat::from_fn(3, 3, |r, c| t.from_int((r * 3 + c) as i64));
        let i = Mat::identity(&t, 3);
        assert_eq!(a.mul(&t, &i), a);
        let a2 = a.mul(&t, &a);
        assert_eq!(a2.trace(&t), a.trace_of_product(&t, &a));
        assert_eq!(a.trace(&t), t.from_int(12));
    }

    #[test]
    fn dump_round_trip() {
        let t = TowerParams::new(&make_field(5, 1).unwrap(), 4).unwrap();
        let a = Mat::from_fn(2, 2, |r, c| t.add(&t.from_int(r as i64), &t.pi_pow(c)));
        let basis = vec![(ExponentVector(vec![0]), Q::from_integer(0)), (ExponentVector(vec![1]), Q::new(1, 2))];
        let mut buf = Vec::new();
        dump_matrix(&mut buf, &t, &basis, &a).unwrap();
        let (p, aa, prec, b, m) = load_matrix(&mut buf.as_slice()).unwrap();
        assert_eq!((p, aa, prec), (5, 1, 4));
        assert_eq!(b, basis);
        assert_eq!(m, a);
        buf[0] = b'X';
        assert!(load_matrix(&mut buf.as_slice()).is_err());
    }
}
