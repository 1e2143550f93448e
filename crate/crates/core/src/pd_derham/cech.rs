use super::{Cell, ChainComplex, PdObject};
use crate::error::{Error, Result};
use crate::padic_linalg::{ElementaryDivisors, Matrix, Zpn};
use crate::smooth_lift::{AlgebraKind, Presentation};
use std::fmt;

/// A localizing element of `R[x]`: the unit `1` or `x - c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Localizer {
    Unit,
    Linear(i64),
}

impl fmt::Display for Localizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Localizer::Unit => write!(f, "1"),
            Localizer::Linear(0) => write!(f, "x"),
            Localizer::Linear(c) if *c > 0 => write!(f, "x-{c}"),
            Localizer::Linear(c) => write!(f, "x+{}", -c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechReport {
    pub cover: Vec<Localizer>,
    pub cells: Vec<Cell>,
    pub pole_pieces: usize,
}

/// Summands of the localizations. Over `Z_p`, when the `c_i` are distinct
/// mod `p`, partial fractions give `R[x][1/∏_(i∈S)(x - c_i)] = R[x] ⊕
/// ⊕_(i∈S, k≥1) R (x - c_i)^(-k)`, each summand stable under `d/dx` and
/// under the restriction maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sector {
    Poly,
    Pole(usize),
}

fn check_cover(ring: Zpn, cover: &[Localizer]) -> Result<()> {
    if cover.is_empty() || cover.len() > 3 {
        return Err(Error::Config("a cover has between 1 and 3 elements".into()));
    }
    let p = ring.p() as i64;
    let roots: Vec<i64> =
        cover.iter().filter_map(|l| if let Localizer::Linear(c) = l { Some(c.rem_euclid(p)) } else { None }).collect();
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..].contains(a) {
            return Err(Error::Unsupported(format!(
                "two localizing elements vanish at x = {a} mod {p}; partial fractions need distinct residues"
            )));
        }
    }
    let unit = cover.contains(&Localizer::Unit) || roots.len() >= 2;
    if !unit {
        return Err(Error::NotACover(format!(
            "every element of {{{}}} vanishes at x = {} mod {p}",
            cover.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "),
            roots[0]
        )));
    }
    Ok(())
}

fn subsets(r: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << r)).map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect()).collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Total complex of the Čech double complex of de Rham complexes on one
/// sector and graded degree, with `D = d + (-1)^q δ` in degree `q + s`.
fn sector_total(ring: Zpn, cover: &[Localizer], sector: Sector, g: i64) -> Result<ChainComplex> {
    // the one-variable de Rham piece: z^g in degree 0, z^(g-1) dz in degree 1
    let (has0, has1) = match sector {
        Sector::Poly => (g >= 0, g >= 1),
        Sector::Pole(_) => (g <= -1, g <= 0),
    };
    let name = match sector {
        Sector::Poly => "x".to_string(),
        Sector::Pole(i) => format!("({})", cover[i]),
    };
    let opens: Vec<Vec<usize>> = subsets(cover.len())
        .into_iter()
        .filter(|t| match sector {
            Sector::Poly => true,
            Sector::Pole(i) => t.contains(&i),
        })
        .collect();
    let mut cells: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cover.len() + 2];
    for (k, t) in opens.iter().enumerate() {
        let s = t.len() - 1;
        if has0 {
            cells[s].push((k, 0));
        }
        if has1 {
            cells[s + 1].push((k, 1));
        }
    }
    let label = |&(k, q): &(usize, usize)| {
        let u = opens[k].iter().map(|&i| cover[i].to_string()).collect::<Vec<_>>().join(",");
        if q == 0 {
            format!("[{u}] {name}^{g}")
        } else {
            format!("[{u}] {name}^{} d{name}", g - 1)
        }
    };
    let mut diffs = Vec::new();
    for n in 0..cells.len() - 1 {
        let (rows, cols) = (&cells[n], &cells[n + 1]);
        let mut mat = Matrix::zero(ring, rows.len(), cols.len());
        for (r, &(k, q)) in rows.iter().enumerate() {
            for (c, &(k2, q2)) in cols.iter().enumerate() {
                if k2 == k && q == 0 && q2 == 1 {
                    mat.set(r, c, ring.from_i64(g));
                } else if q2 == q && opens[k2].len() == opens[k].len() + 1 {
                    if let Some(pos) = opens[k2].iter().position(|i| !opens[k].contains(i)) {
                        let mut rest = opens[k2].clone();
                        rest.remove(pos);
                        if rest == opens[k] {
                            let neg = (pos + q) % 2 == 1;
                            mat.set(r, c, if neg { ring.neg(1) } else { 1 });
                        }
                    }
                }
            }
        }
        diffs.push(mat);
    }
    let labels = cells.iter().map(|c| c.iter().map(label).collect()).collect();
    ChainComplex::new(ring, 0, labels, diffs)
}

/// Čech descent for a cover of the affine line by localizations: the total
/// complex over the cover has the cohomology of `dR(A)` on every graded
/// piece of the window, and the pole summands contribute nothing.
pub fn cech_descent_check(a: &Presentation, cover: &[Localizer], window: i64) -> Result<CechReport> {
    if a.kind() != AlgebraKind::Free || a.n_gens() != 1 {
        return Err(Error::Unsupported("Čech descent is implemented for covers of the affine line".into()));
    }
    let ring = a.ring();
    check_cover(ring, cover)?;
    let obj = PdObject::from_presentation(a, 0, 1, window)?;
    let mut cells = Vec::new();
    for g in 0..=window {
        let direct = obj.complex(g, false)?.cohomology()?;
        let total = sector_total(ring, cover, Sector::Poly, g)?.cohomology()?;
        for (&n, got) in &total {
            let want = direct.get(&n).cloned().unwrap_or_else(|| ElementaryDivisors::zero(ring));
            if *got != want {
                return Err(Error::MismatchWitness {
                    degree: n,
                    graded: g.to_string(),
                    left: format!("Čech total: {got}"),
                    right: format!("dR: {want}"),
                });
            }
            if n <= 1 {
                cells.push(Cell { degree: n, graded: g, divisors: got.clone() });
            }
        }
    }
    let mut pole_pieces = 0;
    for (i, l) in cover.iter().enumerate() {
        if *l == Localizer::Unit {
            continue;
        }
        for g in -window..=0 {
            let total = sector_total(ring, cover, Sector::Pole(i), g)?.cohomology()?;
            if let Some((&n, h)) = total.iter().find(|(_, h)| !h.is_zero()) {
                return Err(Error::MismatchWitness {
                    degree: n,
                    graded: format!("pole of {l}, order {}", -g),
                    left: format!("Čech total: {h}"),
                    right: "0".into(),
                });
            }
            pole_pieces += 1;
        }
    }
    Ok(CechReport { cover: cover.to_vec(), cells, pole_pieces })
}
