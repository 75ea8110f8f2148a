//! The matrices under study: `±1` Hadamard matrices, unit-modulus complex
//! matrices, and exact Fourier matrices `F_G` stored as root-of-unity exponents.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cyclotomic::root_sum_integer;
use crate::error::{GlowError, Result};
use crate::group::GroupSpec;

/// Largest Fourier or Sylvester order built by this module.
pub const MAX_MATRIX_ORDER: usize = 1 << 12;

/// Tolerance on `| |h| − 1 |` for complex entries.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(GlowError::argument("permutation length mismatch"));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GlowError::argument("not a permutation"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// An `N × N` matrix with `±1` entries, flagged with whether its rows are
/// pairwise orthogonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryHadamard {
    n: usize,
    entries: Vec<i8>,
    hadamard: bool,
}

impl BinaryHadamard {
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GlowError::argument(format!(
                    "row {i} has length {} ≠ {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| x != 1 && x != -1) {
                return Err(GlowError::argument(format!(
                    "row {i} has an entry outside ±1"
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self::from_entries(n, entries))
    }

    fn from_entries(n: usize, entries: Vec<i8>) -> Self {
        let mut m = BinaryHadamard {
            n,
            entries,
            hadamard: false,
        };
        m.hadamard = m.rows_orthogonal();
        m
    }

    fn rows_orthogonal(&self) -> bool {
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| {
                self.row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(&a, &b)| (a * b) as i64)
                    .sum::<i64>()
                    == 0
            })
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_hadamard(&self) -> bool {
        self.hadamard
    }

    pub fn require_hadamard(&self) -> Result<()> {
        if self.hadamard {
            Ok(())
        } else {
            Err(GlowError::precondition(
                "matrix rows are not pairwise orthogonal",
            ))
        }
    }

    pub fn total_sum(&self) -> i64 {
        self.entries.iter().map(|&x| x as i64).sum()
    }

    /// `H̃_{ij} = a_i b_j H_{ij}` for sign vectors `a`, `b`.
    pub fn switched(&self, a: &[i8], b: &[i8]) -> Result<Self> {
        if a.len() != self.n || b.len() != self.n {
            return Err(GlowError::argument("switching vectors must have length N"));
        }
        if a.iter().chain(b).any(|&x| x != 1 && x != -1) {
            return Err(GlowError::argument(
                "binary switching vectors take ±1 entries",
            ));
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| a[k / n] * b[k % n] * self.entries[k])
            .collect();
        Ok(Self::from_entries(n, entries))
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let entries = perm.iter().flat_map(|&p| self.row(p).to_vec()).collect();
        Ok(Self::from_entries(self.n, entries))
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entry(k / n, perm[k % n])).collect();
        Ok(Self::from_entries(n, entries))
    }

    /// Switched so that the first row and the first column are all `+1`.
    pub fn dephased(&self) -> Self {
        let b: Vec<i8> = self.row(0).to_vec();
        let a: Vec<i8> = (0..self.n).map(|i| self.entry(i, 0) * b[0]).collect();
        self.switched(&a, &b)
            .expect("vectors built from the matrix")
    }

    /// The `+`/`-` grid text format, one row per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for i in 0..self.n {
            for &x in self.row(i) {
                s.push(if x > 0 { '+' } else { '-' });
            }
            s.push('\n');
        }
        s
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|&x| Complex64::new(x as f64, 0.0))
                .collect(),
        }
    }
}

/// `n`-fold Kronecker power of `[[1,1],[1,−1]]`.
pub fn sylvester_hadamard(n: usize) -> Result<BinaryHadamard> {
    if n > 12 {
        return Err(GlowError::size(format!("Sylvester power {n} exceeds 12")));
    }
    let order = 1usize << n;
    let entries = (0..order * order)
        .map(|k| {
            let (i, j) = (k / order, k % order);
            if (i & j).count_ones() % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(BinaryHadamard::from_entries(order, entries))
}

/// Parses the `+`/`-` grid format. Trailing whitespace on each line and
/// trailing blank lines are ignored. Non-Hadamard matrices load with the
/// flag cleared.
pub fn load_binary_matrix(text: &str) -> Result<BinaryHadamard> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.trim_end())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .skip_while(|l| l.is_empty())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    let n = lines.len();
    if n == 0 {
        return Err(GlowError::parse(0, "empty matrix"));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (line_no, line) in lines.iter().enumerate() {
        let mut count = 0;
        for c in line.chars() {
            match c {
                '+' => entries.push(1),
                '-' => entries.push(-1),
                other => {
                    return Err(GlowError::parse(
                        line_no + 1,
                        format!("line {}: unexpected character {other:?}", line_no + 1),
                    ))
                }
            }
            count += 1;
        }
        if count != n {
            return Err(GlowError::parse(
                line_no + 1,
                format!("line {}: expected {n} entries, found {count}", line_no + 1),
            ));
        }
    }
    Ok(BinaryHadamard::from_entries(n, entries))
}

/// An `N × N` matrix with unit-modulus complex entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(GlowError::argument(format!("expected {} entries", n * n)));
        }
        if let Some(k) = entries
            .iter()
            .position(|z| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
        {
            return Err(GlowError::argument(format!(
                "entry ({}, {}) is not unit modulus",
                k / n,
                k % n
            )));
        }
        Ok(ComplexMatrix { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Rows pairwise orthogonal up to `|⟨r_i, r_j⟩| ≤ tol · N`.
    pub fn is_hadamard(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let dot: Complex64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| a * b.conj())
                    .sum();
                dot.norm() <= tol * n as f64
            })
        })
    }

    /// `H̃_{ij} = a_i b_j H_{ij}` for unit-modulus `a`, `b`.
    pub fn switched(&self, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != self.n || b.len() != self.n {
            return Err(GlowError::argument("switching vectors must have length N"));
        }
        if a.iter()
            .chain(b)
            .any(|z| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
        {
            return Err(GlowError::argument(
                "complex switching vectors must be unit modulus",
            ));
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| a[k / n] * b[k % n] * self.entries[k])
            .collect();
        Ok(ComplexMatrix { n, entries })
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let entries = perm.iter().flat_map(|&p| self.row(p).to_vec()).collect();
        Ok(ComplexMatrix { n: self.n, entries })
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entry(k / n, perm[k % n])).collect();
        Ok(ComplexMatrix { n, entries })
    }

    pub fn total_sum(&self) -> Complex64 {
        self.entries.iter().sum()
    }
}

/// `F_G` as a table of exponents: entry `(i, x)` stands for `exp(2πi·e/L)`
/// with `e = Σ_r i_r x_r (L/N_r) mod L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierMatrix {
    group: GroupSpec,
    exponents: Vec<u32>,
}

/// Exact Fourier matrix of `group`.
pub fn fourier_matrix(group: &GroupSpec) -> Result<FourierMatrix> {
    let n = group.order();
    if n > MAX_MATRIX_ORDER {
        return Err(GlowError::size(format!(
            "Fourier matrix of order {n} exceeds {MAX_MATRIX_ORDER}"
        )));
    }
    let l = group.exponent() as u64;
    let scale: Vec<u64> = group.factors().iter().map(|&f| l / f as u64).collect();
    let coords: Vec<Vec<u32>> = (0..n).map(|i| group.decode(i)).collect();
    let mut exponents = vec![0u32; n * n];
    for i in 0..n {
        for x in 0..n {
            let e: u64 = coords[i]
                .iter()
                .zip(&coords[x])
                .zip(&scale)
                .map(|((&a, &b), &s)| a as u64 * b as u64 * s)
                .sum();
            exponents[i * n + x] = (e % l) as u32;
        }
    }
    Ok(FourierMatrix {
        group: group.clone(),
        exponents,
    })
}

/// The Walsh matrix `W_{2^n}`, i.e. the Fourier matrix of `Z_2^n`.
pub fn walsh_matrix(n: usize) -> Result<FourierMatrix> {
    if n == 0 || n > 12 {
        return Err(GlowError::size(format!(
            "Walsh exponent {n} outside 1..=12"
        )));
    }
    fourier_matrix(&GroupSpec::elementary_two(n)?)
}

impl FourierMatrix {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Root-of-unity order `L` the exponents live in.
    pub fn root_order(&self) -> u32 {
        self.group.exponent()
    }

    pub fn exponent(&self, i: usize, x: usize) -> u32 {
        self.exponents[i * self.order() + x]
    }

    pub fn exponent_row(&self, i: usize) -> &[u32] {
        let n = self.order();
        &self.exponents[i * n..(i + 1) * n]
    }

    pub fn realize_complex(&self) -> ComplexMatrix {
        let l = self.root_order() as f64;
        let entries = self
            .exponents
            .iter()
            .map(|&e| Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / l))
            .collect();
        ComplexMatrix {
            n: self.order(),
            entries,
        }
    }

    /// The `±1` matrix when every entry is real (exponent 2 groups, or order 1).
    pub fn to_binary(&self) -> Option<BinaryHadamard> {
        let l = self.root_order();
        if l > 2 {
            return None;
        }
        let entries = self
            .exponents
            .iter()
            .map(|&e| if e == 0 { 1 } else { -1 })
            .collect();
        Some(BinaryHadamard::from_entries(self.order(), entries))
    }

    /// `Σ_x F_{ix}` evaluated exactly, `None` if it is not a rational integer.
    pub fn row_sum_exact(&self, i: usize) -> Option<i64> {
        let mut counts = vec![0i64; self.root_order() as usize];
        for &e in self.exponent_row(i) {
            counts[e as usize] += 1;
        }
        root_sum_integer(&counts, self.root_order())
    }
}

impl std::fmt::Display for FourierMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.order();
        let mut s = String::new();
        for i in 0..n {
            let row: Vec<String> = self.exponent_row(i).iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        write!(
            f,
            "F_{} (exponents mod {}):\n{s}",
            self.group,
            self.root_order()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::abelian_groups_of_order;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn fourier_examples() {
        let f2 = fourier_matrix(&GroupSpec::cyclic(2).unwrap()).unwrap();
        assert_eq!(f2.exponents, vec![0, 0, 0, 1]);
        assert_eq!(f2.root_order(), 2);
        let f4 = fourier_matrix(&GroupSpec::cyclic(4).unwrap()).unwrap();
        assert_eq!(f4.exponent(1, 1), 1);
        assert!(close(f4.realize_complex().entry(1, 1), Complex64::i()));

        let v = fourier_matrix(&GroupSpec::new(&[2, 2]).unwrap())
            .unwrap()
            .realize_complex();
        let f = f2.realize_complex();
        for i in 0..4 {
            for j in 0..4 {
                let kron = f.entry(i / 2, j / 2) * f.entry(i % 2, j % 2);
                assert!(close(v.entry(i, j), kron));
            }
        }
    }

    #[test]
    fn fourier_is_symmetric_and_additive() {
        for n in 1..=24u32 {
            for g in abelian_groups_of_order(n).unwrap() {
                let f = fourier_matrix(&g).unwrap();
                let l = f.root_order();
                let n = g.order();
                for i in 0..n {
                    for x in 0..n {
                        assert_eq!(f.exponent(i, x), f.exponent(x, i));
                        for j in 0..n {
                            assert_eq!(
                                f.exponent(g.add_index(i, j), x),
                                (f.exponent(i, x) + f.exponent(j, x)) % l
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fourier_realizations_are_hadamard() {
        for n in 1..=64u32 {
            for g in abelian_groups_of_order(n).unwrap() {
                assert!(
                    fourier_matrix(&g)
                        .unwrap()
                        .realize_complex()
                        .is_hadamard(1e-9),
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn exact_column_sums() {
        for n in 1..=64u32 {
            for g in abelian_groups_of_order(n).unwrap() {
                let f = fourier_matrix(&g).unwrap();
                for i in 0..g.order() {
                    let expected = if i == 0 { n as i64 } else { 0 };
                    assert_eq!(f.row_sum_exact(i), Some(expected), "{g} row {i}");
                }
            }
        }
    }

    #[test]
    fn walsh_and_sylvester() {
        let w1 = walsh_matrix(1).unwrap();
        assert_eq!(w1, fourier_matrix(&GroupSpec::cyclic(2).unwrap()).unwrap());
        let w2 = walsh_matrix(2).unwrap().to_binary().unwrap();
        assert!(w2.is_hadamard());
        for n in 1..=6 {
            assert_eq!(
                walsh_matrix(n).unwrap().to_binary().unwrap(),
                sylvester_hadamard(n).unwrap()
            );
        }
        assert!(walsh_matrix(13).is_err());
        assert!(sylvester_hadamard(13).is_err());
    }

    #[test]
    fn sylvester_examples() {
        let h4 = sylvester_hadamard(2).unwrap();
        let row_sums: Vec<i64> = (0..4)
            .map(|i| h4.dephased().row(i).iter().map(|&x| x as i64).sum())
            .collect();
        assert_eq!(row_sums, vec![4, 0, 0, 0]);
        assert!(sylvester_hadamard(3).unwrap().is_hadamard());
        let h16 = sylvester_hadamard(4).unwrap();
        assert!(h16.is_hadamard());
        assert!(h16.entries.iter().all(|&x| x == 1 || x == -1));
    }

    #[test]
    fn load_examples() {
        let h = load_binary_matrix("++\n+-").unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.is_hadamard());
        let ones = load_binary_matrix("++++\n++++\n++++\n++++\n").unwrap();
        assert!(!ones.is_hadamard());
        assert!(ones.require_hadamard().is_err());
        let h4 = sylvester_hadamard(2).unwrap();
        assert_eq!(load_binary_matrix(&h4.to_text()).unwrap(), h4);
        assert_eq!(load_binary_matrix("++  \n+-\t\n\n").unwrap(), h);
        match load_binary_matrix("++\n+") {
            Err(GlowError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        match load_binary_matrix("++\n+x") {
            Err(GlowError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn switching_examples() {
        let h = sylvester_hadamard(1).unwrap();
        assert_eq!(h.switched(&[1, 1], &[1, 1]).unwrap(), h);
        let s = h.switched(&[1, -1], &[1, 1]).unwrap();
        assert_eq!(s.row(1), &[-1, 1]);
        assert!(s.is_hadamard());
        let a = [1, -1, -1, 1];
        let b = [-1, 1, 1, 1];
        let h4 = sylvester_hadamard(2).unwrap();
        let phi: i64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (a[i] * b[j] * h4.entry(i, j)) as i64)
            .sum();
        assert_eq!(h4.switched(&a, &b).unwrap().total_sum(), phi);
        assert!(h.switched(&[1], &[1, 1]).is_err());
        assert!(h.switched(&[1, 2], &[1, 1]).is_err());

        let f = fourier_matrix(&GroupSpec::cyclic(3).unwrap())
            .unwrap()
            .realize_complex();
        let a: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(1.0, 0.3 * k as f64))
            .collect();
        let fs = f.switched(&a, &a).unwrap();
        assert!(fs.is_hadamard(1e-9));
        assert!(f.switched(&[Complex64::new(2.0, 0.0); 3], &a).is_err());
        assert!(ComplexMatrix::new(1, vec![Complex64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn permutations_preserve_hadamard() {
        let h = sylvester_hadamard(3).unwrap();
        let perm = [3, 1, 7, 0, 2, 6, 5, 4];
        assert!(h.permute_rows(&perm).unwrap().is_hadamard());
        assert!(h.permute_cols(&perm).unwrap().is_hadamard());
        assert!(h.permute_rows(&[0, 0, 1, 2, 3, 4, 5, 6]).is_err());
    }
}
