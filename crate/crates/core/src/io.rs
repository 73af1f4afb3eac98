//! Plain-text formats for states, Hamiltonians and real matrices.
//!
//! Whitespace-separated tokens, `#` starts a comment, blank lines are ignored.
//! Line and column numbers in errors are 1-based; indices inside files are 0-based.
//!
//! ```text
//! dims 2 2          dims 2 2           sites 2            dim 2
//! 0 0.7071 0        density            site 0 dim 2       20 16
//! 1 0 0             0 0 0.5 0          0 0 1 0            16 20
//! ...               ...                ...
//! ```
//!
//! Pure states list every basis index once (`index re im`); density matrices
//! list every entry once (`row col re im`); Hamiltonian sites appear in order,
//! each followed by `d^2` entries.

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::CMatrix;
use crate::probes::{DensityOp, StateVector};
use crate::scalar::{c, C};

/// Pure states read from files are renormalized if their norm is within this of one.
pub const FILE_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeFile {
    Pure(StateVector<f64>),
    Mixed(DensityOp<f64>),
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    fn usize(&self) -> Result<usize> {
        self.text
            .parse()
            .map_err(|_| self.err(format!("expected a non-negative integer, found `{}`", self.text)))
    }

    fn real(&self) -> Result<f64> {
        match self.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(format!("expected a finite real number, found `{}`", self.text))),
        }
    }

    fn keyword(&self, word: &str) -> Result<()> {
        if self.text == word {
            Ok(())
        } else {
            Err(self.err(format!("expected `{word}`, found `{}`", self.text)))
        }
    }
}

/// Non-empty lines as token lists.
struct Lines<'a> {
    lines: Vec<Vec<Token<'a>>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (k, raw) in text.lines().enumerate() {
            last_line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (i, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(i),
                    (true, Some(s)) => {
                        toks.push(Token {
                            text: &content[s..i],
                            line: k + 1,
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            if !toks.is_empty() {
                lines.push(toks);
            }
        }
        Self { lines, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&[Token<'a>]> {
        self.lines.get(self.pos).map(Vec::as_slice)
    }

    fn next(&mut self, what: &str) -> Result<Vec<Token<'a>>> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l.clone())
            }
            None => Err(Error::parse(self.last_line + 1, 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(l) => Err(l[0].err("unexpected trailing content")),
        }
    }
}

/// Splits a line into exactly `n` tokens.
fn fields<'a>(line: &[Token<'a>], n: usize, what: &str) -> Result<Vec<Token<'a>>> {
    if line.len() < n {
        let t = line[line.len() - 1];
        return Err(Error::parse(
            t.line,
            t.column + t.text.chars().count(),
            format!("expected {n} fields ({what}), found {}", line.len()),
        ));
    }
    if line.len() > n {
        return Err(line[n].err(format!("expected {n} fields ({what}), found {}", line.len())));
    }
    Ok(line.to_vec())
}

fn in_range(tok: &Token<'_>, value: usize, bound: usize) -> Result<usize> {
    if value >= bound {
        return Err(tok.err(format!("index {value} out of range (must be < {bound})")));
    }
    Ok(value)
}

/// Reads `count` lines of `row col re im` into a `dim x dim` matrix, requiring each entry once.
fn read_entries(lines: &mut Lines<'_>, dim: usize, what: &str) -> Result<CMatrix<f64>> {
    let mut m = CMatrix::zeros(dim, dim);
    let mut seen = vec![false; dim * dim];
    for _ in 0..dim * dim {
        let line = lines.next(what)?;
        let f = fields(&line, 4, "row col re im")?;
        let r = in_range(&f[0], f[0].usize()?, dim)?;
        let col = in_range(&f[1], f[1].usize()?, dim)?;
        if std::mem::replace(&mut seen[r * dim + col], true) {
            return Err(f[0].err(format!("duplicate entry ({r}, {col})")));
        }
        m[(r, col)] = c(f[2].real()?, f[3].real()?);
    }
    Ok(m)
}

pub fn parse_state(text: &str) -> Result<ProbeFile> {
    let mut lines = Lines::new(text);
    let header = lines.next("`dims` header")?;
    header[0].keyword("dims")?;
    if header.len() < 2 {
        return Err(Error::parse(header[0].line, header[0].column + 4, "`dims` needs at least one site dimension"));
    }
    let mut site_dims = Vec::with_capacity(header.len() - 1);
    for t in &header[1..] {
        let d = t.usize()?;
        if d == 0 {
            return Err(t.err("site dimension must be positive"));
        }
        site_dims.push(d);
    }
    let dim: usize = site_dims.iter().product();

    if lines.peek().is_some_and(|l| l[0].text == "density") {
        let line = lines.next("`density`")?;
        fields(&line, 1, "density header")?;
        let m = read_entries(&mut lines, dim, "density matrix entry")?;
        lines.finish()?;
        return DensityOp::new(site_dims, m).map(ProbeFile::Mixed);
    }

    let mut amps = vec![C::new(0.0, 0.0); dim];
    let mut seen = vec![false; dim];
    for _ in 0..dim {
        let line = lines.next("amplitude line `index re im`")?;
        let f = fields(&line, 3, "index re im")?;
        let idx = in_range(&f[0], f[0].usize()?, dim)?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(f[0].err(format!("duplicate amplitude index {idx}")));
        }
        amps[idx] = c(f[1].real()?, f[2].real()?);
    }
    lines.finish()?;
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > FILE_NORM_TOL {
        return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
    }
    StateVector::normalized(site_dims, amps).map(ProbeFile::Pure)
}

pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian<f64>> {
    let mut lines = Lines::new(text);
    let header = lines.next("`sites` header")?;
    let f = fields(&header, 2, "sites N")?;
    f[0].keyword("sites")?;
    let n = f[1].usize()?;
    if n == 0 {
        return Err(f[1].err("at least one site is required"));
    }
    let mut generators = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines.next(&format!("`site {i} dim d`"))?;
        let f = fields(&line, 4, "site i dim d")?;
        f[0].keyword("site")?;
        if f[1].usize()? != i {
            return Err(f[1].err(format!("expected site {i} (sites are listed in order from 0)")));
        }
        f[2].keyword("dim")?;
        let d = f[3].usize()?;
        if d == 0 {
            return Err(f[3].err("site dimension must be positive"));
        }
        generators.push(read_entries(&mut lines, d, "generator entry")?);
    }
    lines.finish()?;
    Hamiltonian::new(generators)
}

/// Real square matrix: `dim N` followed by `N` rows of `N` reals.
pub fn parse_matrix(text: &str) -> Result<CMatrix<f64>> {
    let mut lines = Lines::new(text);
    let header = lines.next("`dim` header")?;
    let f = fields(&header, 2, "dim N")?;
    f[0].keyword("dim")?;
    let n = f[1].usize()?;
    if n == 0 {
        return Err(f[1].err("dimension must be positive"));
    }
    let mut values = Vec::with_capacity(n * n);
    for _ in 0..n {
        let line = lines.next("matrix row")?;
        for t in fields(&line, n, "matrix row")? {
            values.push(t.real()?);
        }
    }
    lines.finish()?;
    CMatrix::from_real(n, n, &values)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_state(s: &StateVector<f64>) -> String {
    let mut out = dims_header(s.site_dims());
    for (i, a) in s.amplitudes().iter().enumerate() {
        out.push_str(&format!("{i} {} {}\n", num(a.re), num(a.im)));
    }
    out
}

pub fn write_density(rho: &DensityOp<f64>) -> String {
    let mut out = dims_header(rho.site_dims());
    out.push_str("density\n");
    out.push_str(&entries(rho.matrix()));
    out
}

pub fn write_hamiltonian(h: &Hamiltonian<f64>) -> String {
    let mut out = format!("sites {}\n", h.n_sites());
    for (i, g) in h.generators().iter().enumerate() {
        out.push_str(&format!("site {i} dim {}\n", g.rows()));
        out.push_str(&entries(g));
    }
    out
}

/// Writes the real parts; intended for real symmetric matrices.
pub fn write_matrix(m: &CMatrix<f64>) -> String {
    let mut out = format!("dim {}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| num(m[(i, j)].re)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn dims_header(dims: &[usize]) -> String {
    let d: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("dims {}\n", d.join(" "))
}

fn entries(m: &CMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push_str(&format!("{i} {j} {} {}\n", num(m[(i, j)].re), num(m[(i, j)].im)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{haar_random_pure, random_mixed};

    fn parse_err(r: Result<impl std::fmt::Debug>) -> (usize, usize) {
        match r {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn state_round_trip() {
        let s = haar_random_pure::<f64>(&[2, 3], 5).unwrap();
        match parse_state(&write_state(&s)).unwrap() {
            ProbeFile::Pure(t) => assert_eq!(t.amplitudes().len(), 6),
            other => panic!("{other:?}"),
        }
        let rho = random_mixed::<f64>(&[2, 2], 2, 1).unwrap();
        match parse_state(&write_density(&rho)).unwrap() {
            ProbeFile::Mixed(r) => assert!(r.matrix().max_abs_diff(rho.matrix()) < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_any_order() {
        let text = "# a Bell pair\ndims 2 2\n3 0.7071067811865476 0 # last\n0 0.7071067811865476 0\n\n1 0 0\n2 0 0\n";
        let ProbeFile::Pure(s) = parse_state(text).unwrap() else { panic!() };
        assert!((s.amplitudes()[3].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn truncated_state_reports_position() {
        let text = "dims 2 2\n0 1 0\n1 0 0\n";
        assert_eq!(parse_err(parse_state(text)), (4, 1));
        let text = "dims 2\n0 1\n";
        assert_eq!(parse_err(parse_state(text)), (2, 4));
    }

    #[test]
    fn malformed_tokens() {
        assert_eq!(parse_err(parse_state("dims 2\n0 1 0\n1 x 0\n")), (3, 3));
        assert_eq!(parse_err(parse_state("dim 2\n")), (1, 1));
        assert_eq!(parse_err(parse_state("dims 2\n0 1 0\n0 0 0\n")), (3, 1));
        assert_eq!(parse_err(parse_state("dims 2\n0 1 0\n2 0 0\n")), (3, 1));
        assert_eq!(parse_err(parse_state("dims 2\n0 1 0\n1 0 0\n7\n")), (4, 1));
        assert_eq!(parse_err(parse_state("")), (1, 1));
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        assert!(matches!(parse_state("dims 2\n0 1 0\n1 1 0\n"), Err(Error::InvalidState(_))));
    }

    #[test]
    fn hamiltonian_round_trip() {
        let h = Hamiltonian::<f64>::pauli_z(2).unwrap();
        assert_eq!(parse_hamiltonian(&write_hamiltonian(&h)).unwrap(), h);
        let bad = "sites 2\nsite 1 dim 1\n0 0 1 0\n";
        assert_eq!(parse_err(parse_hamiltonian(bad)), (2, 6));
        let non_herm = "sites 1\nsite 0 dim 2\n0 0 1 0\n0 1 1 0\n1 0 0 0\n1 1 0 0\n";
        assert!(matches!(parse_hamiltonian(non_herm), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn matrix_round_trip() {
        let m = CMatrix::from_real(2, 2, &[20.0, 16.0, 16.0, 20.0]).unwrap();
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        assert_eq!(parse_err(parse_matrix("dim 2\n1 2\n3\n")), (3, 2));
    }
}
