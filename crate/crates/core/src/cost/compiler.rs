//! Compiles basis-state permutations into `{X, Toffoli}` circuits over the
//! `n` register lines plus one clean ancilla.
//!
//! Line `ℓ < n` carries index bit `n - 1 - ℓ` (line 0 is the most
//! significant bit, i.e. the top of the output register); line `n` is the
//! ancilla. Each basis transposition `(a b)` is built as `C · M · C`, where
//! `C` is a fan of ancilla-assisted CNOTs from a pivot bit that makes `b`
//! differ from `a` only at the pivot, and `M` is a mixed-polarity
//! multi-controlled X on the pivot. The multi-controlled X splits its
//! controls in two halves and uses the clean ancilla plus borrowed lines, so
//! every transposition costs `Θ(n)` gates.

use std::fmt;

use crate::error::{shape_err, NflError, Result};
use crate::model::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    /// `Ccx(c1, c2, target)`.
    Ccx(usize, usize, usize),
}

/// A circuit on `n + 1` lines, line `n` being the ancilla.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateList {
    n: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(n: usize) -> Self {
        GateList { n, gates: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ancilla(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Ccx(..))).count()
    }

    pub fn uses_ancilla(&self) -> bool {
        let a = self.ancilla();
        self.gates.iter().any(|g| match *g {
            Gate::X(t) => t == a,
            Gate::Ccx(c1, c2, t) => c1 == a || c2 == a || t == a,
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let lines = self.n + 1;
        let ok = match gate {
            Gate::X(t) => t < lines,
            Gate::Ccx(c1, c2, t) => c1 < lines && c2 < lines && t < lines && c1 != c2 && c1 != t && c2 != t,
        };
        if !ok {
            return Err(NflError::Validation(format!("invalid gate {gate} on {lines} lines")));
        }
        self.gates.push(gate);
        Ok(())
    }

    fn line_mask(&self, line: usize) -> u64 {
        if line < self.n {
            1 << (self.n - 1 - line)
        } else {
            1 << self.n
        }
    }

    /// Runs the circuit on a full basis state: bits `0..n` are the register
    /// index and bit `n` is the ancilla.
    pub fn simulate(&self, mut state: u64) -> u64 {
        for g in &self.gates {
            match *g {
                Gate::X(t) => state ^= self.line_mask(t),
                Gate::Ccx(c1, c2, t) => {
                    let m = self.line_mask(c1) | self.line_mask(c2);
                    if state & m == m {
                        state ^= self.line_mask(t);
                    }
                }
            }
        }
        state
    }

    /// Truth-table check: every register index maps to `p(index)` with the
    /// ancilla starting and ending in 0.
    pub fn realizes(&self, p: &Permutation) -> bool {
        if p.len() != 1 << self.n {
            return false;
        }
        (0..p.len()).all(|k| self.simulate(k as u64) == p.apply(k) as u64)
    }

    /// Reads the one-gate-per-line text form produced by `Display`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut out = GateList::new(n);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num =
                |s: &str| s.parse::<usize>().map_err(|_| NflError::Validation(format!("line {}: bad operand {s:?}", lineno + 1)));
            let gate = match parts.as_slice() {
                ["X", t] => Gate::X(num(t)?),
                ["CCX", a, b, t] => Gate::Ccx(num(a)?, num(b)?, num(t)?),
                _ => return Err(NflError::Validation(format!("line {}: cannot parse {line:?}", lineno + 1))),
            };
            out.push(gate)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X(t) => write!(f, "X {t}"),
            Gate::Ccx(a, b, t) => write!(f, "CCX {a} {b} {t}"),
        }
    }
}

impl fmt::Display for GateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

struct Emitter {
    out: GateList,
}

impl Emitter {
    fn x(&mut self, t: usize) {
        self.out.gates.push(Gate::X(t));
    }

    fn ccx(&mut self, a: usize, b: usize, t: usize) {
        debug_assert!(a != b && a != t && b != t);
        self.out.gates.push(Gate::Ccx(a, b, t));
    }

    /// X on `target` iff all `controls` are 1, using `helpers` as borrowed
    /// lines that are restored afterwards. Needs `controls.len() - 2` helpers
    /// for three or more controls; 4(k - 2) Toffolis.
    fn mcx_dirty(&mut self, controls: &[usize], target: usize, helpers: &[usize]) {
        let k = controls.len();
        match k {
            0 => self.x(target),
            1 => unreachable!("single-control X is routed through the ancilla"),
            2 => self.ccx(controls[0], controls[1], target),
            _ => {
                assert!(helpers.len() >= k - 2, "not enough borrowed lines");
                let (c, a) = (controls, &helpers[..k - 2]);
                let ladder_down = |e: &mut Self| {
                    for i in (1..=k - 3).rev() {
                        e.ccx(c[i + 1], a[i - 1], a[i]);
                    }
                };
                let ladder_up = |e: &mut Self| {
                    for i in 1..=k - 3 {
                        e.ccx(c[i + 1], a[i - 1], a[i]);
                    }
                };
                self.ccx(c[k - 1], a[k - 3], target);
                ladder_down(self);
                self.ccx(c[0], c[1], a[0]);
                ladder_up(self);
                self.ccx(c[k - 1], a[k - 3], target);
                ladder_down(self);
                self.ccx(c[0], c[1], a[0]);
                ladder_up(self);
            }
        }
    }

    /// X on `target` iff all `controls` are 1, with the clean ancilla free.
    fn mcx(&mut self, controls: &[usize], target: usize) {
        let anc = self.out.ancilla();
        match controls.len() {
            0 => self.x(target),
            1 => {
                // CNOT from a Toffoli whose second control is the ancilla set to 1
                self.x(anc);
                self.ccx(controls[0], anc, target);
                self.x(anc);
            }
            2 => self.ccx(controls[0], controls[1], target),
            m => {
                let k1 = m.div_ceil(2);
                let (g1, g2) = controls.split_at(k1);
                let mut helpers_a: Vec<usize> = g2.to_vec();
                helpers_a.push(target);
                let mut controls_b: Vec<usize> = g2.to_vec();
                controls_b.push(anc);
                self.mcx_dirty(g1, anc, &helpers_a);
                self.mcx_dirty(&controls_b, target, g1);
                self.mcx_dirty(g1, anc, &helpers_a);
            }
        }
    }

    /// Swaps basis states `a` and `b` (register indices) and fixes the rest.
    fn transposition(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.out.n();
        let line = |bit: usize| n - 1 - bit;
        let bit_of = |v: usize, bit: usize| (v >> bit) & 1;
        let diff = a ^ b;
        let pivot = (0..n).rev().find(|&bit| diff >> bit & 1 == 1).expect("a != b");
        let others: Vec<usize> = (0..n).filter(|&bit| bit != pivot && diff >> bit & 1 == 1).collect();
        let anc = self.out.ancilla();

        // C: flip the other differing bits when the pivot matches b
        let fan = |e: &mut Self| {
            if others.is_empty() {
                return;
            }
            let neg = bit_of(b, pivot) == 0;
            if neg {
                e.x(line(pivot));
            }
            e.x(anc);
            for &s in &others {
                e.ccx(line(pivot), anc, line(s));
            }
            e.x(anc);
            if neg {
                e.x(line(pivot));
            }
        };

        fan(self);
        let controls: Vec<usize> = (0..n).rev().filter(|&bit| bit != pivot).collect();
        let flips: Vec<usize> = controls.iter().copied().filter(|&bit| bit_of(a, bit) == 0).map(line).collect();
        for &l in &flips {
            self.x(l);
        }
        let control_lines: Vec<usize> = controls.iter().map(|&bit| line(bit)).collect();
        self.mcx(&control_lines, line(pivot));
        for &l in &flips {
            self.x(l);
        }
        fan(self);
    }
}

/// Circuit for a single basis transposition on `n` register lines.
pub fn compile_transposition(a: usize, b: usize, n: usize) -> Result<GateList> {
    if n == 0 || n > 62 {
        return shape_err(format!("compiler supports 1 <= n <= 62, got {n}"));
    }
    for v in [a, b] {
        if v >> n != 0 {
            return Err(NflError::Index { index: v, size: 1 << n });
        }
    }
    let mut e = Emitter { out: GateList::new(n) };
    e.transposition(a, b);
    Ok(e.out)
}

/// Circuit realizing `p` on `n` register lines; `p` must have size `2^n`.
pub fn compile_permutation(p: &Permutation, n: usize) -> Result<GateList> {
    if n == 0 || n > 62 || p.len() != 1usize << n {
        return shape_err(format!("permutation of size {} cannot be compiled on n = {n} lines", p.len()));
    }
    let mut e = Emitter { out: GateList::new(n) };
    // p = t1 ∘ .. ∘ tk, so tk acts first
    for &(a, b) in p.transpositions().iter().rev() {
        e.transposition(a, b);
    }
    Ok(e.out)
}

/// Worst-case gate count of one compiled transposition on `n` lines.
pub fn transposition_gate_bound(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let m = n - 1;
    let fan = if n >= 2 { 2 + (n - 1) + 2 } else { 0 };
    let dirty = |k: usize| match k {
        0..=2 => 1,
        _ => 4 * (k - 2),
    };
    let core = match m {
        0 => 1,
        1 => 3,
        2 => 1,
        _ => {
            let k1 = m.div_ceil(2);
            2 * dirty(k1) + dirty(m - k1 + 1)
        }
    };
    2 * fan + 2 * m + core
}
