//! Canonical text formats for keys, parameters and ciphertexts.
//!
//! Every file is a magic line, an optional `kind=` line, then `name=value`
//! lines in a fixed order, each terminated by `\n`. Naturals are lowercase
//! hex without leading zeros. Decoding is strict: anything that would not
//! re-encode to the same bytes is rejected, so `encode(decode(b)) == b`.

use std::fmt;

use fragfhe::scheme::{Ciphertext, EvaluationKey, KeyWitnesses, Profile, PublicParams, SchemeError, SecretKey};
use fragfhe::Natural;
use num_traits::Num;
use thiserror::Error;

pub const KEY_MAGIC: &str = "FRAGFHE1";
pub const CIPHERTEXT_MAGIC: &str = "FRAGCT1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("wrong file kind: expected {expected}, found {found}")]
    WrongKind { expected: KeyKind, found: String },
    #[error(transparent)]
    Content(#[from] SchemeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Secret,
    Eval,
    Params,
}

impl fmt::Display for KeyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeyKind::Secret => "secret",
            KeyKind::Eval => "eval",
            KeyKind::Params => "params",
        })
    }
}

/// A value with a canonical on-disk encoding.
pub trait FileFormat: Sized {
    fn encode(&self) -> String;
    fn decode(text: &str) -> Result<Self, FormatError>;
}

pub fn hex(v: &Natural) -> String {
    v.to_str_radix(16)
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn write_file(magic: &str, kind: Option<KeyKind>, fields: &[(String, String)]) -> String {
    let mut out = format!("{magic}\n");
    if let Some(kind) = kind {
        out.push_str(&format!("kind={kind}\n"));
    }
    for (name, value) in fields {
        out.push_str(&format!("{name}={value}\n"));
    }
    out
}

/// Line-by-line reader over a canonical file.
struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str, magic: &str) -> Result<Reader<'a>, FormatError> {
        if text.contains('\r') {
            return Err(syntax(1, "carriage returns are not allowed"));
        }
        let Some(body) = text.strip_suffix('\n') else {
            return Err(syntax(text.lines().count().max(1), "missing final newline"));
        };
        let lines: Vec<&str> = body.split('\n').collect();
        if lines[0] != magic {
            return Err(syntax(1, format!("expected magic {magic:?}")));
        }
        Ok(Reader { lines, pos: 1 })
    }

    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn remaining(&self) -> usize {
        self.lines.len() - self.pos
    }

    fn field(&mut self, name: &str) -> Result<&'a str, FormatError> {
        let line = self.line_no();
        let raw = self.lines.get(self.pos).ok_or_else(|| syntax(line, format!("missing field {name}")))?;
        let value = raw
            .strip_prefix(name)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| syntax(line, format!("expected field {name}")))?;
        self.pos += 1;
        Ok(value)
    }

    fn natural(&mut self, name: &str) -> Result<Natural, FormatError> {
        let line = self.line_no();
        let value = self.field(name)?;
        parse_hex(value).ok_or_else(|| syntax(line, format!("{name} is not canonical lowercase hex")))
    }

    fn naturals<const N: usize>(&mut self, prefix: &str) -> Result<[Natural; N], FormatError> {
        let mut out: [Natural; N] = std::array::from_fn(|_| Natural::default());
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.natural(&format!("{prefix}{}", i + 1))?;
        }
        Ok(out)
    }

    fn decimal(&mut self, name: &str) -> Result<u32, FormatError> {
        let line = self.line_no();
        let value = self.field(name)?;
        let canonical = !value.is_empty() && value.bytes().all(|b| b.is_ascii_digit()) && (value == "0" || !value.starts_with('0'));
        value
            .parse()
            .ok()
            .filter(|_| canonical)
            .ok_or_else(|| syntax(line, format!("{name} is not a canonical decimal")))
    }

    fn kind(&mut self, expected: KeyKind) -> Result<(), FormatError> {
        let found = self.field("kind")?;
        if found == expected.to_string() {
            Ok(())
        } else {
            Err(FormatError::WrongKind { expected, found: found.to_string() })
        }
    }

    fn finish(self) -> Result<(), FormatError> {
        if self.remaining() == 0 {
            Ok(())
        } else {
            Err(syntax(self.line_no(), "unexpected trailing content"))
        }
    }
}

fn parse_hex(s: &str) -> Option<Natural> {
    let digits_ok = !s.is_empty() && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'));
    if !digits_ok || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    Natural::from_str_radix(s, 16).ok()
}

fn named(prefix: &str, values: &[Natural]) -> Vec<(String, String)> {
    values.iter().enumerate().map(|(i, v)| (format!("{prefix}{}", i + 1), hex(v))).collect()
}

impl FileFormat for SecretKey {
    fn encode(&self) -> String {
        let mut fields = vec![("p".to_string(), hex(self.p()))];
        fields.extend(named("k", self.position_keys()));
        fields.extend(named("inv", self.inverses()));
        if let Some(w) = self.witnesses() {
            fields.push(("k".into(), hex(&w.k)));
            fields.extend(named("e", &w.e));
            fields.extend(named("a", &w.a));
            fields.extend(named("b", &w.b));
        }
        write_file(KEY_MAGIC, Some(KeyKind::Secret), &fields)
    }

    fn decode(text: &str) -> Result<Self, FormatError> {
        let mut r = Reader::new(text, KEY_MAGIC)?;
        r.kind(KeyKind::Secret)?;
        let p = r.natural("p")?;
        let keys = r.naturals::<3>("k")?;
        let inv = r.naturals::<3>("inv")?;
        let witnesses = if r.remaining() > 0 {
            let k = r.natural("k")?;
            let e = r.naturals::<3>("e")?;
            let a = r.naturals::<3>("a")?;
            let b = r.naturals::<6>("b")?;
            Some(KeyWitnesses { k, e, a, b })
        } else {
            None
        };
        r.finish()?;
        Ok(SecretKey::from_parts(p, keys, inv, witnesses)?)
    }
}

impl FileFormat for EvaluationKey {
    fn encode(&self) -> String {
        let mut fields = vec![("n".to_string(), hex(self.n()))];
        fields.extend(named("t", self.t()));
        fields.extend(named("d", self.d()));
        write_file(KEY_MAGIC, Some(KeyKind::Eval), &fields)
    }

    fn decode(text: &str) -> Result<Self, FormatError> {
        let mut r = Reader::new(text, KEY_MAGIC)?;
        r.kind(KeyKind::Eval)?;
        let n = r.natural("n")?;
        let t = r.naturals::<6>("t")?;
        let d = r.naturals::<3>("d")?;
        r.finish()?;
        Ok(EvaluationKey::from_parts(n, t, d)?)
    }
}

impl FileFormat for PublicParams {
    fn encode(&self) -> String {
        let toy = u8::from(self.profile == Profile::Toy);
        let fields = vec![
            ("lambda".to_string(), format!("{:x}", self.lambda)),
            ("toy".into(), toy.to_string()),
            ("n".into(), hex(&self.n)),
            ("r1".into(), hex(&self.r1)),
            ("r2".into(), hex(&self.r2)),
        ];
        write_file(KEY_MAGIC, Some(KeyKind::Params), &fields)
    }

    fn decode(text: &str) -> Result<Self, FormatError> {
        let mut r = Reader::new(text, KEY_MAGIC)?;
        r.kind(KeyKind::Params)?;
        let line = r.line_no();
        let lambda = u32::try_from(r.natural("lambda")?).map_err(|_| syntax(line, "lambda out of range"))?;
        let line = r.line_no();
        let profile = match r.field("toy")? {
            "0" => Profile::Production,
            "1" => Profile::Toy,
            _ => return Err(syntax(line, "toy must be 0 or 1")),
        };
        let n = r.natural("n")?;
        let r1 = r.natural("r1")?;
        let r2 = r.natural("r2")?;
        r.finish()?;
        Ok(PublicParams { lambda, profile, n, r1, r2 })
    }
}

impl FileFormat for Ciphertext {
    fn encode(&self) -> String {
        let mut fields = vec![("n".to_string(), hex(self.modulus()))];
        fields.extend(named("c", self.components()));
        fields.push(("depth".into(), self.depth().to_string()));
        write_file(CIPHERTEXT_MAGIC, None, &fields)
    }

    fn decode(text: &str) -> Result<Self, FormatError> {
        let mut r = Reader::new(text, CIPHERTEXT_MAGIC)?;
        let n = r.natural("n")?;
        let c = r.naturals::<3>("c")?;
        let depth = r.decimal("depth")?;
        r.finish()?;
        Ok(Ciphertext::new(c, depth, n)?)
    }
}

/// Size of the fixed-width binary payload of a ciphertext: three residues of
/// `ceil(bits(n) / 8)` bytes each.
pub fn ciphertext_payload_bytes(n: &Natural) -> usize {
    3 * n.bits().div_ceil(8) as usize
}
