//! Circuit intermediate representation.
//!
//! Circuits are immutable values: every transformation returns a new circuit.
//! Qubit `k` maps to bit `k` of a basis-state index.

use crate::error::{Error, Result};
use crate::linalg::{gates, CMatrix};
use std::fmt;
use std::sync::Arc;

pub const TAG_DIAG: &str = "diag";
pub const TAG_COPY0: &str = "copy-0";
pub const TAG_COPY1: &str = "copy-1";
pub const TAG_XTALK: &str = "xtalk";

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    RY(f64),
    RZ(f64),
    RZZ(f64),
    X,
    H,
    CNOT,
    SWAP,
    /// Explicit 4×4 unitary in local index `b0 + 2*b1`.
    Unitary(Arc<CMatrix>),
    Measure,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::RY(_) | GateKind::RZ(_) | GateKind::X | GateKind::H | GateKind::Measure => 1,
            GateKind::RZZ(_) | GateKind::CNOT | GateKind::SWAP | GateKind::Unitary(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::RY(_) => "RY",
            GateKind::RZ(_) => "RZ",
            GateKind::RZZ(_) => "RZZ",
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::CNOT => "CNOT",
            GateKind::SWAP => "SWAP",
            GateKind::Unitary(_) => "U4",
            GateKind::Measure => "MEASURE",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::RY(a) | GateKind::RZ(a) | GateKind::RZZ(a) => Some(*a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    tag: Option<String>,
}

impl Gate {
    fn raw(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits, tag: None }
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::RY(theta), vec![q])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::RZ(theta), vec![q])
    }
    pub fn rzz(theta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::RZZ(theta), vec![a, b])
    }
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![q])
    }
    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, vec![q])
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::raw(GateKind::CNOT, vec![control, target])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::raw(GateKind::SWAP, vec![a, b])
    }
    pub fn measure(q: usize) -> Self {
        Self::raw(GateKind::Measure, vec![q])
    }

    /// Explicit two-qubit unitary; rejected unless `U†U = I` within 1e-12.
    pub fn unitary(matrix: CMatrix, a: usize, b: usize) -> Result<Self> {
        Self::shared_unitary(Arc::new(matrix), a, b)
    }

    pub fn shared_unitary(matrix: Arc<CMatrix>, a: usize, b: usize) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::Invalid(format!("two-qubit unitary must be 4x4, got {}", matrix.dim())));
        }
        let err = matrix.unitarity_error();
        if err > 1e-12 {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self::raw(GateKind::Unitary(matrix), vec![a, b]))
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn with_tag_opt(mut self, tag: Option<&str>) -> Self {
        self.tag = tag.map(str::to_owned);
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tag.as_deref() == Some(tag)
    }

    pub fn is_measure(&self) -> bool {
        matches!(self.kind, GateKind::Measure)
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Same gate on relabelled qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        Self { kind: self.kind.clone(), qubits: self.qubits.iter().map(|&q| map(q)).collect(), tag: self.tag.clone() }
    }

    /// The gate's unitary; `None` for measurements.
    pub fn matrix(&self) -> Option<CMatrix> {
        Some(match &self.kind {
            GateKind::RY(t) => gates::ry(*t),
            GateKind::RZ(t) => gates::rz(*t),
            GateKind::RZZ(t) => gates::rzz(*t),
            GateKind::X => gates::x(),
            GateKind::H => gates::h(),
            GateKind::CNOT => gates::cnot(),
            GateKind::SWAP => gates::swap(),
            GateKind::Unitary(m) => (**m).clone(),
            GateKind::Measure => return None,
        })
    }

    /// Hermitian adjoint; measurements have none.
    pub fn inverse(&self) -> Option<Self> {
        let kind = match &self.kind {
            GateKind::RY(t) => GateKind::RY(-t),
            GateKind::RZ(t) => GateKind::RZ(-t),
            GateKind::RZZ(t) => GateKind::RZZ(-t),
            GateKind::Unitary(m) => GateKind::Unitary(Arc::new(m.adjoint())),
            GateKind::Measure => return None,
            k => k.clone(),
        };
        Some(Self { kind, qubits: self.qubits.clone(), tag: self.tag.clone() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    ops: Vec<Gate>,
    name: String,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self { width, ops: Vec::new(), name: String::new() }
    }

    pub fn named(width: usize, name: impl Into<String>) -> Self {
        Self { width, ops: Vec::new(), name: name.into() }
    }

    /// Builds a circuit from gates, validating each in turn.
    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Value-semantics append: returns a new circuit, leaves `self` untouched.
    pub fn append(&self, gate: Gate) -> Result<Circuit> {
        let mut c = self.clone();
        c.push(gate)?;
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.validate(&gate)?;
        self.ops.push(gate);
        Ok(())
    }

    fn validate(&self, gate: &Gate) -> Result<()> {
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.width {
                return Err(Error::QubitOutOfRange { index: q, width: self.width });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        for &q in &gate.qubits {
            if self.ops.iter().any(|g| g.is_measure() && g.qubits[0] == q) {
                return Err(Error::GateAfterMeasure(q));
            }
        }
        Ok(())
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(Gate::is_measure)
    }

    /// Measured qubits in ascending order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self.ops.iter().filter(|g| g.is_measure()).map(|g| g.qubits[0]).collect();
        qs.sort_unstable();
        qs
    }

    /// The circuit with all measurements removed.
    pub fn without_measurements(&self) -> Circuit {
        Circuit {
            width: self.width,
            ops: self.ops.iter().filter(|g| !g.is_measure()).cloned().collect(),
            name: self.name.clone(),
        }
    }

    /// Appends measurements on every qubit that is not yet measured.
    pub fn measure_all(&self) -> Circuit {
        let measured = self.measured_qubits();
        let mut c = self.clone();
        for q in 0..self.width {
            if !measured.contains(&q) {
                c.ops.push(Gate::measure(q));
            }
        }
        c
    }

    pub fn count_kind(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.ops.iter().filter(|g| pred(&g.kind)).count()
    }

    pub fn count_tag(&self, tag: &str) -> usize {
        self.ops.iter().filter(|g| g.has_tag(tag)).count()
    }

    /// Qubits touched by at least one operation, ascending.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.width];
        for g in &self.ops {
            for &q in &g.qubits {
                used[q] = true;
            }
        }
        (0..self.width).filter(|&q| used[q]).collect()
    }

    /// Drops idle qubits. Returns the compacted circuit and, for each new
    /// qubit, its index in `self`.
    pub fn compact(&self) -> (Circuit, Vec<usize>) {
        let keep = self.active_qubits();
        let mut index = vec![usize::MAX; self.width];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let ops = self.ops.iter().map(|g| g.remapped(|q| index[q])).collect();
        (Circuit { width: keep.len(), ops, name: self.name.clone() }, keep)
    }

    /// Relabels qubits into a circuit of `width` qubits. Measurement order
    /// constraints carry over unchanged.
    pub fn remapped(&self, width: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        Circuit::from_gates(width, self.ops.iter().map(|g| g.remapped(&map))).map(|c| c.with_name(self.name.clone()))
    }

    /// Gates without validation; callers guarantee invariants.
    pub(crate) fn from_parts_unchecked(width: usize, ops: Vec<Gate>, name: String) -> Circuit {
        Circuit { width, ops, name }
    }

    /// Two copies of this circuit on `2n` qubits: copy 0 on qubits `0..n`
    /// (tag "copy-0"), copy 1 on `n..2n` (tag "copy-1"). Qubit `i` pairs
    /// with qubit `n + i`.
    pub fn tensor_two_copies(&self) -> Result<Circuit> {
        if self.has_measurements() {
            return Err(Error::ContainsMeasurement);
        }
        let n = self.width;
        let mut ops = Vec::with_capacity(2 * self.ops.len());
        ops.extend(self.ops.iter().map(|g| g.clone().with_tag(TAG_COPY0)));
        ops.extend(self.ops.iter().map(|g| g.remapped(|q| q + n).with_tag(TAG_COPY1)));
        Ok(Circuit { width: 2 * n, ops, name: format!("{}-x2", self.name) })
    }

    /// Line-oriented text form: header `qubits N`, then one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.width);
        for g in &self.ops {
            out.push_str(&format_gate(g));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut width = None;
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            if width.is_none() {
                if !head.eq_ignore_ascii_case("qubits") {
                    return Err(perr("expected header `qubits N`".into()));
                }
                let n: usize = rest.trim().parse().map_err(|e| perr(format!("bad width: {e}")))?;
                width = Some(n);
                circuit = Some(Circuit::new(n));
                continue;
            }
            let gate = parse_gate(head, rest).map_err(perr)?;
            circuit.as_mut().expect("header parsed").push(gate).map_err(|e| perr(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse { line: 0, msg: "missing header".into() })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn format_angle(a: f64) -> String {
    format!("{a:.16e}")
}

fn format_gate(g: &Gate) -> String {
    let mut fields: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
    match &g.kind {
        GateKind::RY(a) | GateKind::RZ(a) | GateKind::RZZ(a) => fields.push(format_angle(*a)),
        GateKind::Unitary(m) => {
            for v in m.as_slice() {
                fields.push(format_angle(v.re));
                fields.push(format_angle(v.im));
            }
        }
        _ => {}
    }
    if let Some(tag) = &g.tag {
        fields.push(format!("#{tag}"));
    }
    format!("{} {}", g.kind.name(), fields.join(","))
}

fn parse_gate(kind: &str, rest: &str) -> std::result::Result<Gate, String> {
    let mut fields: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let tag = match fields.last() {
        Some(f) if f.starts_with('#') => {
            let t = fields.pop().unwrap()[1..].to_owned();
            Some(t)
        }
        _ => None,
    };
    let kind_upper = kind.to_ascii_uppercase();
    let arity = match kind_upper.as_str() {
        "RY" | "RZ" | "X" | "H" | "MEASURE" => 1,
        "RZZ" | "CNOT" | "SWAP" | "U4" => 2,
        other => return Err(format!("unknown gate kind `{other}`")),
    };
    if fields.len() < arity {
        return Err(format!("{kind_upper} needs {arity} qubit indices"));
    }
    let qubits: Vec<usize> = fields[..arity]
        .iter()
        .map(|f| f.parse().map_err(|e| format!("bad qubit index `{f}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let params: Vec<f64> = fields[arity..]
        .iter()
        .map(|f| f.parse().map_err(|e| format!("bad number `{f}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let expect = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(format!("{kind_upper} takes {n} numeric parameters, got {}", params.len()))
        }
    };
    let gate = match kind_upper.as_str() {
        "RY" => {
            expect(1)?;
            Gate::ry(params[0], qubits[0])
        }
        "RZ" => {
            expect(1)?;
            Gate::rz(params[0], qubits[0])
        }
        "RZZ" => {
            expect(1)?;
            Gate::rzz(params[0], qubits[0], qubits[1])
        }
        "X" => {
            expect(0)?;
            Gate::x(qubits[0])
        }
        "H" => {
            expect(0)?;
            Gate::h(qubits[0])
        }
        "MEASURE" => {
            expect(0)?;
            Gate::measure(qubits[0])
        }
        "CNOT" => {
            expect(0)?;
            Gate::cnot(qubits[0], qubits[1])
        }
        "SWAP" => {
            expect(0)?;
            Gate::swap(qubits[0], qubits[1])
        }
        _ => {
            expect(32)?;
            let mut m = CMatrix::zeros(4);
            for k in 0..16 {
                m[(k / 4, k % 4)] = crate::linalg::C64::new(params[2 * k], params[2 * k + 1]);
            }
            Gate::unitary(m, qubits[0], qubits[1]).map_err(|e| e.to_string())?
        }
    };
    Ok(gate.with_tag_opt(tag.as_deref()))
}
