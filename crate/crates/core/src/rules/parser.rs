use std::collections::{BTreeSet, HashMap, HashSet};

use super::{
    ActionTemplate, Atom, Category, CmpOp, HelperRule, Literal, LintRule, RuleCatalog,
    TemplateArg, Term,
};
use crate::error::RuleError;
use crate::facts::Const;
use crate::fix::ActionKind;
use crate::spec::{Aggregate, Channel, FieldType, Mark, StackMode, Vocabulary};

/// Predicates every fact base may contain, with their arities.
pub const CORE_PREDICATES: &[(&str, usize)] = &[
    ("mark", 1),
    ("raw_mark", 1),
    ("encoding", 1),
    ("channel", 2),
    ("raw_channel", 2),
    ("field", 2),
    ("unknown_field", 2),
    ("type", 2),
    ("raw_type", 2),
    ("aggregate", 2),
    ("raw_aggregate", 2),
    ("bin", 2),
    ("log", 1),
    ("zero", 1),
    ("stack", 2),
    ("fieldtype", 2),
    ("cardinality", 2),
    ("has_nonpositive", 1),
];

const MAX_ACTIONS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Wildcard,
    Int(i64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Op(CmpOp),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
struct Annotation {
    key: String,
    text: String,
    line: usize,
}

enum Item {
    Tok(Spanned),
    Note(Annotation),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> RuleError {
    RuleError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn invalid(line: usize, message: impl Into<String>) -> RuleError {
    RuleError::Invalid {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Item>, RuleError> {
    let mut items = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |items: &mut Vec<Item>, tok: Tok| {
                items.push(Item::Tok(Spanned {
                    tok,
                    line: line_no,
                    column,
                }))
            };
            match c {
                c if c.is_whitespace() => i += 1,
                '%' => {
                    let rest: String = chars[i + 1..].iter().collect();
                    if let Some(body) = rest.strip_prefix('@') {
                        let body = body.trim();
                        let (key, text) = match body.find(char::is_whitespace) {
                            Some(k) => (&body[..k], body[k..].trim()),
                            None => (body, ""),
                        };
                        items.push(Item::Note(Annotation {
                            key: key.to_string(),
                            text: text.to_string(),
                            line: line_no,
                        }));
                    }
                    break;
                }
                '(' => {
                    push(&mut items, Tok::LParen);
                    i += 1;
                }
                ')' => {
                    push(&mut items, Tok::RParen);
                    i += 1;
                }
                ',' => {
                    push(&mut items, Tok::Comma);
                    i += 1;
                }
                '.' => {
                    push(&mut items, Tok::Dot);
                    i += 1;
                }
                ':' => {
                    if chars.get(i + 1) == Some(&'-') {
                        push(&mut items, Tok::If);
                        i += 2;
                    } else {
                        return Err(syntax(line_no, column, "expected `:-`"));
                    }
                }
                '=' => {
                    push(&mut items, Tok::Op(CmpOp::Eq));
                    i += 1;
                }
                '!' => {
                    if chars.get(i + 1) == Some(&'=') {
                        push(&mut items, Tok::Op(CmpOp::Ne));
                        i += 2;
                    } else {
                        return Err(syntax(line_no, column, "expected `!=`"));
                    }
                }
                '<' | '>' => {
                    let eq = chars.get(i + 1) == Some(&'=');
                    let op = match (c, eq) {
                        ('<', false) => CmpOp::Lt,
                        ('<', true) => CmpOp::Le,
                        ('>', false) => CmpOp::Gt,
                        _ => CmpOp::Ge,
                    };
                    push(&mut items, Tok::Op(op));
                    i += if eq { 2 } else { 1 };
                }
                '"' => {
                    let mut s = String::new();
                    let mut j = i + 1;
                    loop {
                        match chars.get(j) {
                            None => return Err(syntax(line_no, column, "unterminated string")),
                            Some('"') => break,
                            Some('\\') => {
                                match chars.get(j + 1) {
                                    Some('n') => s.push('\n'),
                                    Some(&e) => s.push(e),
                                    None => {
                                        return Err(syntax(line_no, column, "unterminated string"))
                                    }
                                }
                                j += 2;
                            }
                            Some(&ch) => {
                                s.push(ch);
                                j += 1;
                            }
                        }
                    }
                    push(&mut items, Tok::Str(s));
                    i = j + 1;
                }
                c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let lexeme: String = chars[i..j].iter().collect();
                    let n = lexeme
                        .parse::<i64>()
                        .map_err(|_| syntax(line_no, column, format!("integer `{lexeme}` out of range")))?;
                    push(&mut items, Tok::Int(n));
                    i = j;
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut j = i + 1;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = if word == "_" {
                        Tok::Wildcard
                    } else if c.is_uppercase() || c == '_' {
                        Tok::Var(word)
                    } else {
                        Tok::Ident(word)
                    };
                    push(&mut items, tok);
                    i = j;
                }
                other => return Err(syntax(line_no, column, format!("unexpected character `{other}`"))),
            }
        }
    }
    Ok(items)
}

struct Statement {
    head: Atom,
    body: Vec<Literal>,
    line: usize,
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    fn peek_tok(&self, ahead: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + ahead).map(|s| &s.tok)
    }

    fn next(&mut self) -> Result<&'a Spanned, RuleError> {
        let t = self.toks.get(self.pos).ok_or_else(|| self.eof())?;
        self.pos += 1;
        Ok(t)
    }

    fn eof(&self) -> RuleError {
        let (line, column) = self
            .toks
            .last()
            .map_or((1, 1), |t| (t.line, t.column + 1));
        syntax(line, column, "unexpected end of input")
    }

    fn term(&mut self) -> Result<Term, RuleError> {
        let t = self.next()?;
        Ok(match &t.tok {
            Tok::Var(v) => Term::Var(v.clone()),
            Tok::Wildcard => Term::Wildcard,
            Tok::Ident(s) => Term::Const(Const::Sym(s.clone())),
            Tok::Int(n) => Term::Const(Const::Int(*n)),
            Tok::Str(s) => Term::Const(Const::Str(s.clone())),
            _ => return Err(syntax(t.line, t.column, "expected a term")),
        })
    }

    fn atom(&mut self) -> Result<Atom, RuleError> {
        let t = self.next()?;
        let Tok::Ident(name) = &t.tok else {
            return Err(syntax(t.line, t.column, "expected a predicate name"));
        };
        let mut args = Vec::new();
        if self.peek_tok(0) == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                let t = self.next()?;
                match t.tok {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(syntax(t.line, t.column, "expected `,` or `)`")),
                }
            }
        }
        Ok(Atom {
            predicate: name.clone(),
            args,
        })
    }

    fn literal(&mut self) -> Result<Literal, RuleError> {
        let first = self.peek().ok_or_else(|| self.eof())?;
        if first.tok == Tok::Ident("not".into())
            && matches!(self.peek_tok(1), Some(Tok::Ident(_)))
        {
            self.pos += 1;
            return Ok(Literal::Neg(self.atom()?));
        }
        let is_atom = matches!(first.tok, Tok::Ident(_))
            && !matches!(self.peek_tok(1), Some(Tok::Op(_)));
        if is_atom {
            return Ok(Literal::Pos(self.atom()?));
        }
        let lhs = self.term()?;
        let t = self.next()?;
        let Tok::Op(op) = t.tok else {
            return Err(syntax(t.line, t.column, "expected a comparison operator"));
        };
        let rhs = self.term()?;
        Ok(Literal::Cmp(lhs, op, rhs))
    }

    fn statement(&mut self) -> Result<Statement, RuleError> {
        let line = self.peek().ok_or_else(|| self.eof())?.line;
        let head = self.atom()?;
        let mut body = Vec::new();
        let t = self.next()?;
        match t.tok {
            Tok::Dot => {}
            Tok::If => loop {
                body.push(self.literal()?);
                let t = self.next()?;
                match t.tok {
                    Tok::Comma => continue,
                    Tok::Dot => break,
                    _ => return Err(syntax(t.line, t.column, "expected `,` or `.`")),
                }
            },
            _ => return Err(syntax(t.line, t.column, "expected `:-` or `.`")),
        }
        Ok(Statement { head, body, line })
    }
}

fn parse_template(text: &str, line: usize) -> Result<ActionTemplate, RuleError> {
    let text = text.trim();
    let (name, args) = match text.find('(') {
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| invalid(line, format!("malformed action template `{text}`")))?;
            let args: Vec<&str> = inner.split(',').map(str::trim).collect();
            (&text[..open], args)
        }
        None => (text, Vec::new()),
    };
    let kind = ActionKind::from_name(name.trim())
        .ok_or_else(|| invalid(line, format!("unknown action `{}`", name.trim())))?;
    let args = args
        .into_iter()
        .map(|a| match a {
            "*" => Ok(TemplateArg::Any),
            "~" => Ok(TemplateArg::Nearest),
            "" => Err(invalid(line, format!("empty argument in `{text}`"))),
            a if a.starts_with(|c: char| c.is_uppercase()) => Ok(TemplateArg::Var(a.to_string())),
            a => Ok(TemplateArg::Const(a.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let template = ActionTemplate { kind, args };
    check_template(&template, line)?;
    Ok(template)
}

/// Checks argument count and keyword arguments of a template.
fn check_template(t: &ActionTemplate, line: usize) -> Result<(), RuleError> {
    use ActionKind as K;
    fn kw<T: Vocabulary>(arg: &TemplateArg) -> bool {
        match arg {
            TemplateArg::Const(s) => T::from_keyword(s).is_some(),
            _ => true,
        }
    }
    let value_ok = |arg: &TemplateArg, allow_nearest: bool| -> bool {
        match arg {
            TemplateArg::Nearest => allow_nearest,
            TemplateArg::Var(_) => false,
            _ => true,
        }
    };
    let bad = || invalid(line, format!("ill-formed action template `{t}`"));
    let a = &t.args;
    let ok = match t.kind {
        K::CorrectMark => a.is_empty(),
        K::ChangeMark => a.len() == 1 && value_ok(&a[0], false) && kw::<Mark>(&a[0]),
        K::AddChannel => {
            a.len() == 2
                && matches!(a[0], TemplateArg::Const(_))
                && kw::<Channel>(&a[0])
                && value_ok(&a[1], false)
                && kw::<FieldType>(&a[1])
        }
        K::ChangeChannel => {
            a.len() == 2 && kw::<Channel>(&a[0]) && value_ok(&a[1], false) && kw::<Channel>(&a[1])
        }
        K::AddField | K::ChangeField => {
            a.len() == 2 && kw::<Channel>(&a[0]) && value_ok(&a[1], true) && kw::<FieldType>(&a[1])
        }
        K::ChangeType => {
            a.len() == 2 && kw::<Channel>(&a[0]) && value_ok(&a[1], false) && kw::<FieldType>(&a[1])
        }
        K::Aggregate | K::ChangeAggregate => {
            a.len() == 2 && kw::<Channel>(&a[0]) && value_ok(&a[1], false) && kw::<Aggregate>(&a[1])
        }
        K::Stack => {
            a.len() == 2 && kw::<Channel>(&a[0]) && value_ok(&a[1], false) && kw::<StackMode>(&a[1])
        }
        _ => a.len() == 1 && kw::<Channel>(&a[0]),
    };
    let selector_ok = t
        .args
        .first()
        .map_or(true, |s| !matches!(s, TemplateArg::Any | TemplateArg::Nearest) || t.kind == K::ChangeMark);
    if ok && selector_ok {
        Ok(())
    } else {
        Err(bad())
    }
}

fn atom_vars(atom: &Atom, out: &mut BTreeSet<String>) {
    for t in &atom.args {
        if let Term::Var(v) = t {
            out.insert(v.clone());
        }
    }
}

/// Every variable must occur in a positive literal; returns the first that
/// does not.
fn unsafe_var(head_vars: &[String], body: &[Literal]) -> Option<String> {
    let mut bound = BTreeSet::new();
    for lit in body {
        if let Literal::Pos(a) = lit {
            atom_vars(a, &mut bound);
        }
    }
    let mut needed: Vec<String> = head_vars.to_vec();
    for lit in body {
        match lit {
            Literal::Neg(a) => {
                let mut vs = BTreeSet::new();
                atom_vars(a, &mut vs);
                needed.extend(vs);
            }
            Literal::Cmp(l, _, r) => {
                for t in [l, r] {
                    match t {
                        Term::Var(v) => needed.push(v.clone()),
                        Term::Wildcard => return Some("_".into()),
                        Term::Const(_) => {}
                    }
                }
            }
            Literal::Pos(_) => {}
        }
    }
    needed.into_iter().find(|v| !bound.contains(v))
}

/// Assigns helper predicates to strata so that each negated dependency is
/// evaluated in an earlier stratum.
fn stratify(helpers: &[HelperRule]) -> Result<Vec<Vec<String>>, RuleError> {
    let derived: BTreeSet<&str> = helpers.iter().map(|h| h.head.predicate.as_str()).collect();
    let mut level: HashMap<&str, usize> = derived.iter().map(|p| (*p, 0)).collect();
    let limit = derived.len();
    loop {
        let mut changed = false;
        for h in helpers {
            let head = h.head.predicate.as_str();
            for lit in &h.body {
                let (atom, neg) = match lit {
                    Literal::Pos(a) => (a, false),
                    Literal::Neg(a) => (a, true),
                    Literal::Cmp(..) => continue,
                };
                let Some(&dep) = level.get(atom.predicate.as_str()) else {
                    continue;
                };
                let need = dep + usize::from(neg);
                if level[head] < need {
                    if need > limit {
                        return Err(RuleError::NotStratified(head.to_string()));
                    }
                    level.insert(head, need);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let top = level.values().copied().max().unwrap_or(0);
    let mut strata = vec![Vec::new(); if derived.is_empty() { 0 } else { top + 1 }];
    for p in derived {
        strata[level[p]].push(p.to_string());
    }
    Ok(strata)
}

/// Parses a rule file.
pub fn parse_rules(text: &str) -> Result<RuleCatalog, RuleError> {
    let items = tokenize(text)?;

    let mut version = None;
    let mut extensions: Vec<(String, usize)> = Vec::new();
    let mut toks: Vec<Spanned> = Vec::new();
    // Annotations are attached to the statement that follows them.
    let mut notes_before: Vec<(usize, Annotation)> = Vec::new();
    for item in items {
        match item {
            Item::Tok(t) => toks.push(t),
            Item::Note(n) => match n.key.as_str() {
                "version" => version = Some(n.text.clone()),
                "predicate" => {
                    let (name, arity) = n
                        .text
                        .rsplit_once('/')
                        .and_then(|(p, a)| Some((p.trim(), a.trim().parse::<usize>().ok()?)))
                        .ok_or_else(|| invalid(n.line, "expected `%@predicate name/arity`"))?;
                    extensions.push((name.to_string(), arity));
                }
                "category" | "describe" | "action" => notes_before.push((toks.len(), n)),
                other => return Err(invalid(n.line, format!("unknown annotation `%@{other}`"))),
            },
        }
    }

    let mut parser = Parser {
        toks: &toks,
        pos: 0,
    };
    let mut statements: Vec<(Statement, Vec<Annotation>)> = Vec::new();
    let mut note_iter = notes_before.into_iter().peekable();
    while parser.peek().is_some() {
        let start = parser.pos;
        let mut notes = Vec::new();
        while let Some((at, _)) = note_iter.peek() {
            if *at <= start {
                notes.push(note_iter.next().unwrap().1);
            } else {
                break;
            }
        }
        let st = parser.statement()?;
        statements.push((st, notes));
    }
    if let Some((_, n)) = note_iter.next() {
        return Err(invalid(n.line, "annotation is not followed by a rule"));
    }

    let mut arities: HashMap<String, usize> = CORE_PREDICATES
        .iter()
        .map(|(p, a)| (p.to_string(), *a))
        .collect();
    for (p, a) in &extensions {
        if let Some(prev) = arities.insert(p.clone(), *a) {
            if prev != *a {
                return Err(invalid(0, format!("predicate `{p}` redeclared with arity {a}")));
            }
        }
    }
    let fact_predicates: HashSet<String> = arities.keys().cloned().collect();

    // Heads of helper rules extend the vocabulary.
    for (st, _) in &statements {
        if st.head.predicate == "hard" {
            continue;
        }
        let p = &st.head.predicate;
        if fact_predicates.contains(p) {
            return Err(invalid(st.line, format!("rule head `{p}` redefines a fact predicate")));
        }
        match arities.get(p) {
            Some(&a) if a != st.head.args.len() => {
                return Err(RuleError::UnknownPredicate {
                    line: st.line,
                    name: p.clone(),
                    arity: st.head.args.len(),
                })
            }
            _ => {
                arities.insert(p.clone(), st.head.args.len());
            }
        }
    }

    let mut rules: Vec<LintRule> = Vec::new();
    let mut helpers: Vec<HelperRule> = Vec::new();
    let mut ids = HashSet::new();
    for (st, notes) in statements {
        for lit in &st.body {
            let atom = match lit {
                Literal::Pos(a) | Literal::Neg(a) => a,
                Literal::Cmp(..) => continue,
            };
            if arities.get(&atom.predicate) != Some(&atom.args.len()) {
                return Err(RuleError::UnknownPredicate {
                    line: st.line,
                    name: atom.predicate.clone(),
                    arity: atom.args.len(),
                });
            }
        }

        if st.head.predicate != "hard" {
            if !notes.is_empty() {
                return Err(invalid(st.line, "annotations must precede a `hard` rule"));
            }
            let mut head_vars = Vec::new();
            for t in &st.head.args {
                match t {
                    Term::Var(v) => head_vars.push(v.clone()),
                    Term::Wildcard => return Err(invalid(st.line, "wildcard in rule head")),
                    Term::Const(_) => {}
                }
            }
            if let Some(var) = unsafe_var(&head_vars, &st.body) {
                return Err(RuleError::Unsafe {
                    line: st.line,
                    rule: st.head.predicate.clone(),
                    var,
                });
            }
            helpers.push(HelperRule {
                head: st.head,
                body: st.body,
                line: st.line,
            });
            continue;
        }

        let mut args = st.head.args.into_iter();
        let id = match args.next() {
            Some(Term::Const(Const::Sym(id))) => id,
            _ => return Err(invalid(st.line, "`hard` must start with a rule identifier")),
        };
        let mut head_params = Vec::new();
        for t in args {
            match t {
                Term::Var(v) => head_params.push(v),
                _ => return Err(invalid(st.line, format!("parameters of `{id}` must be variables"))),
            }
        }
        if st.body.is_empty() {
            return Err(invalid(st.line, format!("rule `{id}` has an empty body")));
        }
        if let Some(var) = unsafe_var(&head_params, &st.body) {
            return Err(RuleError::Unsafe {
                line: st.line,
                rule: id,
                var,
            });
        }
        if !ids.insert(id.clone()) {
            return Err(RuleError::DuplicateRule(id));
        }

        let mut category = None;
        let mut description = None;
        let mut actions = Vec::new();
        for n in notes {
            match n.key.as_str() {
                "category" => {
                    category = Some(Category::from_name(&n.text).ok_or_else(|| {
                        invalid(n.line, format!("unknown category `{}`", n.text))
                    })?)
                }
                "describe" => description = Some(n.text),
                _ => {
                    let t = parse_template(&n.text, n.line)?;
                    for arg in &t.args {
                        if let TemplateArg::Var(v) = arg {
                            if !head_params.contains(v) {
                                return Err(invalid(
                                    n.line,
                                    format!("action variable {v} is not a parameter of `{id}`"),
                                ));
                            }
                        }
                    }
                    actions.push(t);
                }
            }
        }
        let category =
            category.ok_or_else(|| invalid(st.line, format!("rule `{id}` has no %@category")))?;
        let description =
            description.ok_or_else(|| invalid(st.line, format!("rule `{id}` has no %@describe")))?;
        if actions.is_empty() || actions.len() > MAX_ACTIONS {
            return Err(invalid(
                st.line,
                format!("rule `{id}` must list 1 to {MAX_ACTIONS} actions, found {}", actions.len()),
            ));
        }
        rules.push(LintRule {
            id,
            category,
            description,
            head_params,
            body: st.body,
            actions,
            line: st.line,
        });
    }

    let strata = stratify(&helpers)?;
    Ok(RuleCatalog {
        version,
        rules,
        helpers,
        extensions,
        strata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(text: &str) -> String {
        format!("%@category I1\n%@describe d\n%@action REMOVE_BIN(C)\n{text}\n")
    }

    #[test]
    fn quoted_rule_parses() {
        let cat = parse_rules(&rule("hard(bin_and_aggregate,C) :- bin(E,_), aggregate(E,_), channel(E,C).")).unwrap();
        let r = &cat.rules[0];
        assert_eq!(r.id, "bin_and_aggregate");
        assert_eq!(r.head_params, vec!["C".to_string()]);
        assert_eq!(r.body.len(), 3);
    }

    #[test]
    fn unbound_head_variable_is_rejected() {
        let err = parse_rules(&rule("hard(r,C) :- log(E).")).unwrap_err();
        assert!(matches!(err, RuleError::Unsafe { ref var, .. } if var == "C"));
    }

    #[test]
    fn unbound_negated_variable_is_rejected() {
        let err = parse_rules(&rule("hard(r,C) :- channel(E,C), not field(F,_).")).unwrap_err();
        assert!(matches!(err, RuleError::Unsafe { ref var, .. } if var == "F"));
    }

    #[test]
    fn unknown_predicate_is_rejected() {
        let err = parse_rules(&rule("hard(r,C) :- chanel(E,C).")).unwrap_err();
        assert!(matches!(err, RuleError::UnknownPredicate { ref name, arity: 2, .. } if name == "chanel"));
        let err = parse_rules(&rule("hard(r,C) :- channel(C).")).unwrap_err();
        assert!(matches!(err, RuleError::UnknownPredicate { .. }));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = rule("hard(r,C) :- channel(_,C).") + &rule("hard(r,C) :- channel(_,C), log(_).");
        assert_eq!(parse_rules(&text).unwrap_err(), RuleError::DuplicateRule("r".into()));
    }

    #[test]
    fn syntax_errors_carry_a_location() {
        let err = parse_rules("hard(r,C) :- channel(E,C)\n").unwrap_err();
        assert!(matches!(err, RuleError::Syntax { line: 1, .. }));
        let err = parse_rules("foo(X) :- channel(X,_) $").unwrap_err();
        assert!(matches!(err, RuleError::Syntax { line: 1, column: 24, .. }));
    }

    #[test]
    fn negative_cycles_are_rejected() {
        let text = "p(E) :- encoding(E), not q(E).\nq(E) :- encoding(E), not p(E).\n";
        assert!(matches!(parse_rules(text), Err(RuleError::NotStratified(_))));
    }

    #[test]
    fn action_count_is_bounded() {
        let text = "%@category I1\n%@describe d\nhard(r,C) :- channel(_,C).\n";
        assert!(matches!(parse_rules(text), Err(RuleError::Invalid { .. })));
        let many = "%@action REMOVE_BIN(C)\n".repeat(6);
        let text = format!("%@category I1\n%@describe d\n{many}hard(r,C) :- channel(_,C).\n");
        assert!(matches!(parse_rules(&text), Err(RuleError::Invalid { .. })));
    }

    #[test]
    fn templates_are_checked() {
        assert!(parse_template("CHANGE_CHANNEL(C,*)", 1).is_ok());
        assert!(parse_template("CHANGE_FIELD(C,~)", 1).is_ok());
        assert!(parse_template("CHANGE_MARK(*)", 1).is_ok());
        assert!(parse_template("CHANGE_MARK(pointt)", 1).is_err());
        assert!(parse_template("REMOVE_BIN", 1).is_err());
        assert!(parse_template("FLIP(C)", 1).is_err());
    }
}
