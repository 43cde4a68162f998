//! Text syntax for groupoids and for elements of `A(G)`.
//!
//! Groupoids:
//!
//! ```text
//! expr := group:cyclic:<n> | group:sym:<n> | pair:<k>
//!       | union(<expr>,<expr>) | product(<expr>,<expr>) | file:<path>
//! ```
//!
//! Elements, as sums of optionally scaled atoms:
//!
//! ```text
//! element := [sign] term (sign term)*
//! term    := [coef '*'] atom
//! coef    := '(' scalar ')' | unsigned scalar term, e.g. 3, 2i, 1/2
//! atom    := delta:#<k> | delta:{<label>,...} | one:#<k> | one:<label>
//! ```
//!
//! `delta:` is the image under `π` of a point mass on a full bisection,
//! given by its canonical index in `F(G)` or by its arrow labels; `one:` is
//! the indicator of a single arrow, by index or label.

use std::fmt;
use std::path::PathBuf;

use crate::bisection::{FullBisection, FullGroup};
use crate::error::{Error, ParseError, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::scalar::Scalar;
use crate::steinberg::SteinbergElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupoidExpr {
    Cyclic(usize),
    Symmetric(usize),
    Pair(usize),
    Union(Box<GroupoidExpr>, Box<GroupoidExpr>),
    Product(Box<GroupoidExpr>, Box<GroupoidExpr>),
    File(PathBuf),
}

impl GroupoidExpr {
    pub fn union(a: GroupoidExpr, b: GroupoidExpr) -> Self {
        GroupoidExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn product(a: GroupoidExpr, b: GroupoidExpr) -> Self {
        GroupoidExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn build(&self) -> Result<FiniteGroupoid> {
        match self {
            GroupoidExpr::Cyclic(n) => FiniteGroupoid::cyclic(*n),
            GroupoidExpr::Symmetric(n) => FiniteGroupoid::symmetric(*n),
            GroupoidExpr::Pair(k) => FiniteGroupoid::pair(*k),
            GroupoidExpr::Union(a, b) => Ok(FiniteGroupoid::disjoint_union(&a.build()?, &b.build()?)),
            GroupoidExpr::Product(a, b) => Ok(FiniteGroupoid::product(&a.build()?, &b.build()?)),
            GroupoidExpr::File(path) => FiniteGroupoid::from_json_str(&std::fs::read_to_string(path)?),
        }
    }
}

impl fmt::Display for GroupoidExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupoidExpr::Cyclic(n) => write!(f, "group:cyclic:{n}"),
            GroupoidExpr::Symmetric(n) => write!(f, "group:sym:{n}"),
            GroupoidExpr::Pair(k) => write!(f, "pair:{k}"),
            GroupoidExpr::Union(a, b) => write!(f, "union({a},{b})"),
            GroupoidExpr::Product(a, b) => write!(f, "product({a},{b})"),
            GroupoidExpr::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl std::str::FromStr for GroupoidExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        parse_expr(s)
    }
}

pub fn parse_expr(text: &str) -> std::result::Result<GroupoidExpr, ParseError> {
    let mut p = Cursor::new(text);
    let expr = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(expr),
        Some(')') => Err(p.error("unbalanced parentheses: unexpected ')'")),
        Some(c) => Err(p.error(format!("unexpected trailing input starting at {c:?}"))),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, message: impl fmt::Display) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> std::result::Result<(), ParseError> {
        self.skip_ws();
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(what.to_string()))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.text[start..self.pos]
    }

    fn integer(&mut self) -> std::result::Result<usize, ParseError> {
        let start = self.pos;
        let token = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-' || c == '+');
        if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::new(start, format!("malformed integer {token:?}")));
        }
        token.parse().map_err(|_| ParseError::new(start, format!("malformed integer {token:?}")))
    }

    fn expr(&mut self) -> std::result::Result<GroupoidExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphabetic());
        match name {
            "group" => {
                self.expect(':', "expected ':' after \"group\"")?;
                let kind_start = self.pos;
                let kind = self.take_while(|c| c.is_ascii_alphabetic());
                let build: fn(usize) -> GroupoidExpr = match kind {
                    "cyclic" => GroupoidExpr::Cyclic,
                    "sym" => GroupoidExpr::Symmetric,
                    other => return Err(ParseError::new(kind_start, format!("unknown constructor \"group:{other}\""))),
                };
                self.expect(':', "expected ':' before group size")?;
                Ok(build(self.integer()?))
            }
            "pair" => {
                self.expect(':', "expected ':' after \"pair\"")?;
                Ok(GroupoidExpr::Pair(self.integer()?))
            }
            "union" | "product" => {
                self.expect('(', &format!("expected '(' after \"{name}\""))?;
                let a = self.expr()?;
                self.expect(',', "expected ',' between arguments")?;
                let b = self.expr()?;
                self.expect(')', "unbalanced parentheses: expected ')'")?;
                Ok(if name == "union" { GroupoidExpr::union(a, b) } else { GroupoidExpr::product(a, b) })
            }
            "file" => {
                self.expect(':', "expected ':' after \"file\"")?;
                let path = self.take_while(|c| c != ',' && c != ')').trim();
                if path.is_empty() {
                    return Err(self.error("empty file path"));
                }
                Ok(GroupoidExpr::File(PathBuf::from(path)))
            }
            "" => Err(ParseError::new(start, "expected a groupoid constructor")),
            other => Err(ParseError::new(start, format!("unknown constructor {other:?}"))),
        }
    }
}

/// Parses an element expression over `g`. Full bisections referenced by
/// index are enumerated on demand, subject to `cap`.
pub fn parse_element(g: &FiniteGroupoid, text: &str, cap: usize) -> Result<SteinbergElement> {
    let mut p = Cursor::new(text);
    let mut group: Option<FullGroup> = None;
    let mut acc = SteinbergElement::zero(g);
    let mut first = true;
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            if first {
                return Err(p.error("empty element expression").into());
            }
            break;
        }
        let negative = match p.peek() {
            Some('+') => {
                p.bump();
                false
            }
            Some('-') => {
                p.bump();
                true
            }
            _ if first => false,
            Some(c) => return Err(p.error(format!("expected '+' or '-' before next term, found {c:?}")).into()),
            None => unreachable!(),
        };
        first = false;
        p.skip_ws();
        let mut coef = coefficient(&mut p)?;
        if negative {
            coef = -coef;
        }
        p.skip_ws();
        let atom = atom(&mut p, g, &mut group, cap)?;
        acc = &acc + &atom.scale(&coef);
    }
    Ok(acc)
}

fn coefficient(p: &mut Cursor<'_>) -> Result<Scalar> {
    let start = p.pos;
    let literal = if p.eat('(') {
        let inner = p.take_while(|c| c != ')');
        if !p.eat(')') {
            return Err(p.error("unbalanced parentheses: expected ')'").into());
        }
        inner
    } else if p.peek().is_some_and(|c| c.is_ascii_digit() || c == 'i') && !p.rest().starts_with("one:") {
        p.take_while(|c| c.is_ascii_digit() || c == 'i' || c == '/')
    } else {
        return Ok(Scalar::ONE);
    };
    let value: Scalar = literal
        .parse()
        .map_err(|e: ParseError| ParseError::new(start + e.position, e.message))?;
    p.skip_ws();
    if !p.eat('*') {
        return Err(p.error("expected '*' after coefficient").into());
    }
    Ok(value)
}

fn atom(p: &mut Cursor<'_>, g: &FiniteGroupoid, group: &mut Option<FullGroup>, cap: usize) -> Result<SteinbergElement> {
    let start = p.pos;
    if p.rest().starts_with("delta:") {
        p.pos += "delta:".len();
        if p.eat('#') {
            let k = p.integer()?;
            if group.is_none() {
                *group = Some(FullGroup::new(g, cap)?);
            }
            let fg = group.as_ref().expect("just set");
            let u = fg
                .get(k)
                .ok_or_else(|| Error::Invalid(format!("F(G) has {} elements, no index #{k}", fg.len())))?;
            return Ok(SteinbergElement::of_bisection(g, u.as_bisection()));
        }
        if !p.eat('{') {
            return Err(p.error("expected '#' or '{' after \"delta:\"").into());
        }
        let mut arrows = Vec::new();
        loop {
            p.skip_ws();
            arrows.push(arrow(p, g, &[',', '}'])?);
            p.skip_ws();
            if p.eat('}') {
                break;
            }
            if !p.eat(',') {
                return Err(p.error("expected ',' or '}' in bisection").into());
            }
        }
        let u = FullBisection::new(g, arrows)?;
        return Ok(SteinbergElement::of_bisection(g, u.as_bisection()));
    }
    if p.rest().starts_with("one:") {
        p.pos += "one:".len();
        return Ok(SteinbergElement::point(g, arrow(p, g, &['+', '-'])?));
    }
    Err(ParseError::new(start, "expected \"delta:\" or \"one:\"").into())
}

/// An arrow as `#k` or as a label running to the first stop character or
/// whitespace outside parentheses.
fn arrow(p: &mut Cursor<'_>, g: &FiniteGroupoid, stops: &[char]) -> Result<ArrowId> {
    let start = p.pos;
    if p.eat('#') {
        let k = p.integer()?;
        if k >= g.len() {
            return Err(Error::UnknownArrow(format!("#{k}")));
        }
        return Ok(ArrowId(k));
    }
    let mut depth = 0usize;
    while let Some(c) = p.peek() {
        if depth == 0 && (c.is_whitespace() || stops.contains(&c)) {
            break;
        }
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => break,
            ')' => depth -= 1,
            _ => {}
        }
        p.bump();
    }
    let label = &p.text[start..p.pos];
    if label.is_empty() {
        return Err(ParseError::new(start, "expected an arrow label or #index").into());
    }
    g.arrow_by_label(label).ok_or_else(|| Error::UnknownArrow(label.to_string()))
}
