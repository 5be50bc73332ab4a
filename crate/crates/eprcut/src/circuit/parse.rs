//! Circuit readers: the native gatelist format and an OpenQASM 2.0 subset.
//!
//! Gatelist format: one gate per line (`cx 0 1`, `h 3`, `cr 2 5 0.7853`),
//! blank lines and `#` comments ignored. The qubit count is inferred as
//! max index + 1 unless an explicit `qubits N` header line overrides it.
//!
//! QASM subset: `OPENQASM 2.0;` header, optional `include`, exactly one
//! `qreg`, and the gates {h, x, z, rz, cx, cp, crz, swap}; `cp`/`crz` map to
//! CR. Anything else is rejected with its line number.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFormat {
    Gatelist,
    Qasm2,
}

pub fn parse_circuit(text: &str, format: CircuitFormat) -> Result<Circuit> {
    match format {
        CircuitFormat::Gatelist => parse_gatelist(text),
        CircuitFormat::Qasm2 => parse_qasm2(text),
    }
}

fn parse_gatelist(text: &str) -> Result<Circuit> {
    let mut declared_qubits: Option<usize> = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, "#").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();

        if head == "qubits" {
            if gates.is_empty() && declared_qubits.is_none() {
                let n = parse_usize(args.first().copied(), line_no, "qubit count")?;
                if n == 0 {
                    return Err(Error::parse(line_no, "qubit count must be positive"));
                }
                declared_qubits = Some(n);
                continue;
            }
            return Err(Error::parse(line_no, "duplicate or late `qubits` header"));
        }

        let gate = parse_gate_line(head, &args, line_no)?;
        if let Some(n) = declared_qubits {
            if gate.max_qubit() >= n {
                return Err(Error::parse(
                    line_no,
                    format!("qubit index {} out of range (qubits {})", gate.max_qubit(), n),
                ));
            }
        }
        gates.push(gate);
    }

    if gates.is_empty() {
        return Err(Error::EmptyCircuit);
    }
    let inferred = gates.iter().map(Gate::max_qubit).max().unwrap() + 1;
    Circuit::new(declared_qubits.unwrap_or(inferred), gates)
}

fn parse_gate_line(name: &str, args: &[&str], line: usize) -> Result<Gate> {
    let one = |args: &[&str]| -> Result<usize> {
        if args.len() != 1 {
            return Err(Error::parse(line, format!("`{name}` takes one qubit")));
        }
        parse_usize(Some(args[0]), line, "qubit index")
    };
    let two = |args: &[&str]| -> Result<(usize, usize)> {
        if args.len() != 2 {
            return Err(Error::parse(line, format!("`{name}` takes two qubits")));
        }
        let a = parse_usize(Some(args[0]), line, "qubit index")?;
        let b = parse_usize(Some(args[1]), line, "qubit index")?;
        if a == b {
            return Err(Error::parse(line, "two-qubit gate needs distinct qubits"));
        }
        Ok((a, b))
    };

    match name {
        "h" => Ok(Gate::h(one(args)?)),
        "x" => Ok(Gate::x(one(args)?)),
        "z" => Ok(Gate::z(one(args)?)),
        "rz" => {
            if args.len() != 2 {
                return Err(Error::parse(line, "`rz` takes a qubit and an angle"));
            }
            let q = parse_usize(Some(args[0]), line, "qubit index")?;
            let angle = parse_f64(args[1], line)?;
            Ok(Gate::rz(q, angle))
        }
        "cx" => {
            let (a, b) = two(args)?;
            Ok(Gate::cx(a, b))
        }
        "swap" => {
            let (a, b) = two(args)?;
            Ok(Gate::swap(a, b))
        }
        "cr" => {
            if args.len() != 3 {
                return Err(Error::parse(line, "`cr` takes two qubits and an angle"));
            }
            let (a, b) = two(&args[..2])?;
            let angle = parse_f64(args[2], line)?;
            Ok(Gate::cr(a, b, angle))
        }
        other => Err(Error::parse(line, format!("unsupported gate `{other}`"))),
    }
}

fn parse_qasm2(text: &str) -> Result<Circuit> {
    let mut saw_header = false;
    let mut register: Option<(String, usize)> = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, "//").trim();
        if line.is_empty() {
            continue;
        }
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if stmt.starts_with("OPENQASM") {
                if stmt != "OPENQASM 2.0" {
                    return Err(Error::parse(line_no, "expected `OPENQASM 2.0;`"));
                }
                saw_header = true;
                continue;
            }
            if !saw_header {
                return Err(Error::parse(line_no, "missing `OPENQASM 2.0;` header"));
            }
            if stmt.starts_with("include") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                if register.is_some() {
                    return Err(Error::parse(line_no, "only one qreg is supported"));
                }
                register = Some(parse_qreg(rest.trim(), line_no)?);
                continue;
            }
            let (name, size) = register
                .as_ref()
                .ok_or_else(|| Error::parse(line_no, "gate before qreg declaration"))?;
            gates.push(parse_qasm_gate(stmt, name, *size, line_no)?);
        }
    }

    if gates.is_empty() {
        return Err(Error::EmptyCircuit);
    }
    let (_, size) = register.unwrap();
    Circuit::new(size, gates)
}

fn parse_qreg(decl: &str, line: usize) -> Result<(String, usize)> {
    // e.g. `q[5]`
    let open = decl
        .find('[')
        .ok_or_else(|| Error::parse(line, "malformed qreg declaration"))?;
    let close = decl
        .find(']')
        .ok_or_else(|| Error::parse(line, "malformed qreg declaration"))?;
    let name = decl[..open].trim().to_string();
    let size: usize = decl[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, "malformed qreg size"))?;
    if name.is_empty() || size == 0 {
        return Err(Error::parse(line, "malformed qreg declaration"));
    }
    Ok((name, size))
}

fn parse_qasm_gate(stmt: &str, reg: &str, reg_size: usize, line: usize) -> Result<Gate> {
    let (head, operands) = match stmt.find(|c: char| c.is_whitespace()) {
        Some(pos) => (&stmt[..pos], stmt[pos..].trim()),
        None => return Err(Error::parse(line, format!("malformed statement `{stmt}`"))),
    };
    let (name, angle) = match head.find('(') {
        Some(open) => {
            let close = head
                .rfind(')')
                .ok_or_else(|| Error::parse(line, "unbalanced parentheses"))?;
            let expr = &head[open + 1..close];
            (&head[..open], Some(eval_angle(expr, line)?))
        }
        None => (head, None),
    };

    let qubits: Vec<usize> = operands
        .split(',')
        .map(|op| parse_operand(op.trim(), reg, reg_size, line))
        .collect::<Result<_>>()?;

    let two = |qs: &[usize]| -> Result<(usize, usize)> {
        if qs.len() != 2 {
            return Err(Error::parse(line, format!("`{name}` takes two qubits")));
        }
        if qs[0] == qs[1] {
            return Err(Error::parse(line, "two-qubit gate needs distinct qubits"));
        }
        Ok((qs[0], qs[1]))
    };

    match (name, angle) {
        ("h", None) if qubits.len() == 1 => Ok(Gate::h(qubits[0])),
        ("x", None) if qubits.len() == 1 => Ok(Gate::x(qubits[0])),
        ("z", None) if qubits.len() == 1 => Ok(Gate::z(qubits[0])),
        ("rz", Some(a)) if qubits.len() == 1 => Ok(Gate::rz(qubits[0], a)),
        ("cx", None) => {
            let (a, b) = two(&qubits)?;
            Ok(Gate::cx(a, b))
        }
        ("swap", None) => {
            let (a, b) = two(&qubits)?;
            Ok(Gate::swap(a, b))
        }
        ("cp", Some(angle)) | ("crz", Some(angle)) => {
            let (a, b) = two(&qubits)?;
            Ok(Gate::cr(a, b, angle))
        }
        _ => Err(Error::parse(line, format!("unsupported statement `{stmt}`"))),
    }
}

fn parse_operand(op: &str, reg: &str, reg_size: usize, line: usize) -> Result<usize> {
    let rest = op
        .strip_prefix(reg)
        .ok_or_else(|| Error::parse(line, format!("unknown register in `{op}`")))?;
    let idx: usize = rest
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(line, format!("malformed operand `{op}`")))?;
    if idx >= reg_size {
        return Err(Error::parse(
            line,
            format!("qubit index {idx} out of range (qreg {reg}[{reg_size}])"),
        ));
    }
    Ok(idx)
}

/// Evaluates the angle expressions that appear in QASM gate parameters:
/// numbers, `pi`, `+ - * /`, unary minus, and parentheses.
fn eval_angle(expr: &str, line: usize) -> Result<f64> {
    let tokens = tokenize(expr, line)?;
    let mut pos = 0;
    let value = parse_expr(&tokens, &mut pos, line)?;
    if pos != tokens.len() {
        return Err(Error::parse(line, format!("malformed angle `{expr}`")));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Pi,
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(expr: &str, line: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = expr.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            'p' if chars.get(i + 1) == Some(&'i') => {
                tokens.push(Token::Pi);
                i += 2;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == 'e'
                        || (i > start && (chars[i] == '+' || chars[i] == '-') && chars[i - 1] == 'e'))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("malformed number `{text}`")))?;
                tokens.push(Token::Num(value));
            }
            other => {
                return Err(Error::parse(line, format!("unexpected `{other}` in angle")));
            }
        }
    }
    Ok(tokens)
}

fn parse_expr(tokens: &[Token], pos: &mut usize, line: usize) -> Result<f64> {
    let mut value = parse_term(tokens, pos, line)?;
    while let Some(tok) = tokens.get(*pos) {
        match tok {
            Token::Plus => {
                *pos += 1;
                value += parse_term(tokens, pos, line)?;
            }
            Token::Minus => {
                *pos += 1;
                value -= parse_term(tokens, pos, line)?;
            }
            _ => break,
        }
    }
    Ok(value)
}

fn parse_term(tokens: &[Token], pos: &mut usize, line: usize) -> Result<f64> {
    let mut value = parse_factor(tokens, pos, line)?;
    while let Some(tok) = tokens.get(*pos) {
        match tok {
            Token::Star => {
                *pos += 1;
                value *= parse_factor(tokens, pos, line)?;
            }
            Token::Slash => {
                *pos += 1;
                let rhs = parse_factor(tokens, pos, line)?;
                if rhs == 0.0 {
                    return Err(Error::parse(line, "division by zero in angle"));
                }
                value /= rhs;
            }
            _ => break,
        }
    }
    Ok(value)
}

fn parse_factor(tokens: &[Token], pos: &mut usize, line: usize) -> Result<f64> {
    match tokens.get(*pos) {
        Some(Token::Num(v)) => {
            *pos += 1;
            Ok(*v)
        }
        Some(Token::Pi) => {
            *pos += 1;
            Ok(std::f64::consts::PI)
        }
        Some(Token::Minus) => {
            *pos += 1;
            Ok(-parse_factor(tokens, pos, line)?)
        }
        Some(Token::Open) => {
            *pos += 1;
            let value = parse_expr(tokens, pos, line)?;
            match tokens.get(*pos) {
                Some(Token::Close) => {
                    *pos += 1;
                    Ok(value)
                }
                _ => Err(Error::parse(line, "unbalanced parentheses in angle")),
            }
        }
        _ => Err(Error::parse(line, "malformed angle expression")),
    }
}

fn strip_comment<'a>(line: &'a str, marker: &str) -> &'a str {
    match line.find(marker) {
        Some(pos) => &line[..pos],
        None => line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gatelist_infers_qubit_count() {
        let c = parse_circuit("cx 0 1\nh 1\ncx 1 2", CircuitFormat::Gatelist).unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn gatelist_header_overrides_and_checks_range() {
        let c = parse_circuit("qubits 5\ncx 0 1", CircuitFormat::Gatelist).unwrap();
        assert_eq!(c.num_qubits(), 5);

        let err = parse_circuit("qubits 2\ncx 0 3", CircuitFormat::Gatelist).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            parse_circuit("", CircuitFormat::Gatelist),
            Err(Error::EmptyCircuit)
        ));
        assert!(matches!(
            parse_circuit("# nothing here\n", CircuitFormat::Gatelist),
            Err(Error::EmptyCircuit)
        ));
    }

    #[test]
    fn unsupported_gate_reports_line() {
        let err = parse_circuit("cx 0 1\nccx 0 1 2", CircuitFormat::Gatelist).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("ccx"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn qasm_subset_parses_cp_as_cr() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\ncp(pi/4) q[0],q[3];\n";
        let c = parse_circuit(text, CircuitFormat::Qasm2).unwrap();
        assert_eq!(c.len(), 1);
        let gate = c.gates()[0];
        assert_eq!(gate.qubit_pair(), Some((0, 3)));
        assert!((gate.angle().unwrap() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn qasm_rejects_foreign_statements() {
        let text = "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\n";
        let err = parse_circuit(text, CircuitFormat::Qasm2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let text = "OPENQASM 2.0;\nqreg q[2];\nmeasure q[0] -> c[0];\n";
        assert!(parse_circuit(text, CircuitFormat::Qasm2).is_err());
    }

    #[test]
    fn qasm_checks_register_bounds() {
        let text = "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[5];\n";
        let err = parse_circuit(text, CircuitFormat::Qasm2).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn angle_expressions_evaluate() {
        let text = "OPENQASM 2.0;\nqreg q[2];\ncrz(-pi/2 + 1.5*2) q[1],q[0];\n";
        let c = parse_circuit(text, CircuitFormat::Qasm2).unwrap();
        let angle = c.gates()[0].angle().unwrap();
        assert!((angle - (-PI / 2.0 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn gatelist_roundtrip_preserves_circuit() {
        let c = crate::circuit::gen_qft(6).unwrap();
        let text = c.to_gatelist();
        let back = parse_circuit(&text, CircuitFormat::Gatelist).unwrap();
        assert_eq!(c, back);
    }
}
