//! A minimal regular-expression front end: single-character symbols,
//! juxtaposition for concatenation, `+` for union, `*` for star, parentheses,
//! and the literal `eps` for the empty word.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, Dfa, LangError, SymbolId};

#[derive(Debug, Clone)]
enum Ast {
    Eps,
    Sym(char),
    Cat(Box<Ast>, Box<Ast>),
    Alt(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars[self.pos..].iter().find(|c| !c.is_whitespace()).copied()
    }

    fn bump(&mut self) -> Option<char> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn at_eps_literal(&self) -> bool {
        let mut i = self.pos;
        while i < self.chars.len() && self.chars[i].is_whitespace() {
            i += 1;
        }
        self.chars[i..].starts_with(&['e', 'p', 's'])
    }

    fn expr(&mut self) -> Result<Ast, LangError> {
        let mut left = self.term()?;
        while self.peek() == Some('+') {
            self.bump();
            let right = self.term()?;
            left = Ast::Alt(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Ast, LangError> {
        let mut parts = Vec::new();
        loop {
            match self.peek() {
                Some(')') | Some('+') | None => break,
                _ => parts.push(self.factor()?),
            }
        }
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| LangError::Regex("empty term (use `eps` for the empty word)".into()))?;
        Ok(iter.fold(first, |a, b| Ast::Cat(Box::new(a), Box::new(b))))
    }

    fn factor(&mut self) -> Result<Ast, LangError> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.bump();
            node = Ast::Star(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Ast, LangError> {
        if self.at_eps_literal() {
            self.bump();
            self.bump();
            self.bump();
            return Ok(Ast::Eps);
        }
        match self.bump() {
            Some('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(')') => Ok(inner),
                    _ => Err(LangError::Regex("unbalanced parenthesis".into())),
                }
            }
            Some(c) if !"+*()".contains(c) => Ok(Ast::Sym(c)),
            Some(c) => Err(LangError::Regex(format!("unexpected {c:?}"))),
            None => Err(LangError::Regex("unexpected end of pattern".into())),
        }
    }
}

fn collect_symbols(ast: &Ast, out: &mut Vec<char>) {
    match ast {
        Ast::Eps => {}
        Ast::Sym(c) => {
            if !out.contains(c) {
                out.push(*c);
            }
        }
        Ast::Cat(a, b) | Ast::Alt(a, b) => {
            collect_symbols(a, out);
            collect_symbols(b, out);
        }
        Ast::Star(a) => collect_symbols(a, out),
    }
}

#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    sym: Vec<Vec<(SymbolId, usize)>>,
}

impl Nfa {
    fn new_state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.sym.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, ast: &Ast, alphabet: &Alphabet) -> Result<(usize, usize), LangError> {
        match ast {
            Ast::Eps => {
                let s = self.new_state();
                let t = self.new_state();
                self.eps[s].push(t);
                Ok((s, t))
            }
            Ast::Sym(c) => {
                let id = alphabet
                    .id(&c.to_string())
                    .ok_or_else(|| LangError::UnknownSymbol(c.to_string()))?;
                let s = self.new_state();
                let t = self.new_state();
                self.sym[s].push((id, t));
                Ok((s, t))
            }
            Ast::Cat(a, b) => {
                let (sa, ta) = self.build(a, alphabet)?;
                let (sb, tb) = self.build(b, alphabet)?;
                self.eps[ta].push(sb);
                Ok((sa, tb))
            }
            Ast::Alt(a, b) => {
                let s = self.new_state();
                let (sa, ta) = self.build(a, alphabet)?;
                let (sb, tb) = self.build(b, alphabet)?;
                let t = self.new_state();
                self.eps[s].push(sa);
                self.eps[s].push(sb);
                self.eps[ta].push(t);
                self.eps[tb].push(t);
                Ok((s, t))
            }
            Ast::Star(a) => {
                let s = self.new_state();
                let (sa, ta) = self.build(a, alphabet)?;
                let t = self.new_state();
                self.eps[s].push(sa);
                self.eps[s].push(t);
                self.eps[ta].push(sa);
                self.eps[ta].push(t);
                Ok((s, t))
            }
        }
    }

    fn closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for &t in &self.eps[s] {
                if out.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        out
    }
}

/// Compiles a pattern to a minimal DFA. When `alphabet` is `None` the
/// alphabet is inferred from the symbols of the pattern in first-occurrence
/// order.
pub fn parse_regex(pattern: &str, alphabet: Option<&Alphabet>) -> Result<Dfa, LangError> {
    let mut parser = Parser {
        chars: pattern.chars().collect(),
        pos: 0,
    };
    let ast = parser.expr()?;
    if parser.peek().is_some() {
        return Err(LangError::Regex(format!(
            "trailing input at position {}",
            parser.pos
        )));
    }

    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => {
            let mut syms = Vec::new();
            collect_symbols(&ast, &mut syms);
            if syms.is_empty() {
                // a pattern like "eps" still needs a carrier alphabet
                Alphabet::binary()
            } else {
                Alphabet::new(syms.iter().map(|c| c.to_string()))?
            }
        }
    };

    let mut nfa = Nfa::default();
    let (start, accept) = nfa.build(&ast, &alphabet)?;

    // subset construction
    let k = alphabet.len();
    let mut subsets: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut accepting: Vec<usize> = Vec::new();
    let mut order: Vec<BTreeSet<usize>> = Vec::new();
    let init = nfa.closure(&BTreeSet::from([start]));
    subsets.insert(init.clone(), 0);
    order.push(init);
    let mut i = 0;
    while i < order.len() {
        let current = order[i].clone();
        if current.contains(&accept) {
            accepting.push(i);
        }
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &(sym, t) in &nfa.sym[s] {
                    if sym == a {
                        next.insert(t);
                    }
                }
            }
            let next = nfa.closure(&next);
            let fresh = subsets.len();
            let id = *subsets.entry(next.clone()).or_insert_with(|| {
                order.push(next);
                fresh
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }

    let dfa = Dfa::from_parts(alphabet, order.len(), 0, &accepting, delta)?;
    Ok(dfa.minimize())
}
