//! Best-effort lexical extraction of code facts from Java-like sources.
//!
//! This is not a compiler: generics are erased, overloads collapse onto one
//! method path, and method-call receivers are resolved only through
//! declared fields, parameters and locals whose type is declared in the
//! scanned corpus.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use super::facts::{CodeDependency, CodeElement, CodeFacts, CodeKind};
use crate::dependency::DependencyKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    /// File extensions (without the dot) treated as sources.
    pub extensions: Vec<String>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { extensions: vec!["java".to_string()] }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanOutput {
    pub facts: CodeFacts,
    /// Skipped files and unresolved references, sorted.
    pub log: Vec<String>,
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
    Literal,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
}

fn lex(src: &str) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                    if chars[i] == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                i += 2;
            }
            '"' | '\'' => {
                let start_line = line;
                // text blocks
                if c == '"' && chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') {
                    i += 3;
                    while i < chars.len() && !(chars[i] == '"' && chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"')) {
                        if chars[i] == '\n' {
                            line += 1;
                        }
                        i += 1;
                    }
                    i += 3;
                } else {
                    i += 1;
                    while i < chars.len() && chars[i] != c && chars[i] != '\n' {
                        if chars[i] == '\\' {
                            i += 1;
                        }
                        i += 1;
                    }
                    i += 1;
                }
                out.push(Token { tok: Tok::Literal, line: start_line });
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Literal, line });
            }
            c if c.is_alphabetic() || c == '_' || c == '$' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line });
            }
            c => {
                out.push(Token { tok: Tok::Punct(c), line });
                i += 1;
            }
        }
    }
    out
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "break", "case", "catch", "class", "continue", "default", "do", "else", "enum", "extends",
    "final", "finally", "for", "goto", "if", "implements", "import", "instanceof", "interface", "native", "new",
    "package", "private", "protected", "public", "return", "static", "strictfp", "super", "switch", "synchronized",
    "this", "throw", "throws", "transient", "try", "volatile", "while", "true", "false", "null", "yield", "record",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var"];

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "synchronized", "native", "transient", "volatile",
    "default", "strictfp", "sealed",
];

/// Implicitly imported platform types, never reported as unresolved.
const PLATFORM_TYPES: &[&str] = &[
    "Object", "String", "Integer", "Long", "Short", "Byte", "Double", "Float", "Boolean", "Character", "Number",
    "Math", "System", "Thread", "Runnable", "Exception", "RuntimeException", "Error", "Throwable", "Override",
    "Deprecated", "SuppressWarnings", "FunctionalInterface", "Iterable", "Comparable", "CharSequence", "StringBuilder",
    "Class", "Void", "Enum", "Record", "AutoCloseable", "InterruptedException", "IllegalArgumentException",
    "IllegalStateException", "NullPointerException", "UnsupportedOperationException",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

// ---------------------------------------------------------------- syntax

#[derive(Debug, Clone, PartialEq, Eq)]
struct TypeRef {
    segments: Vec<String>,
    line: u32,
}

impl TypeRef {
    fn simple(&self) -> &str {
        self.segments.last().map(String::as_str).unwrap_or_default()
    }

    fn is_primitive(&self) -> bool {
        self.segments.len() == 1 && PRIMITIVES.contains(&self.simple())
    }
}

#[derive(Debug, Clone)]
struct VarDecl {
    name: String,
    ty: TypeRef,
}

#[derive(Debug, Clone)]
enum Event {
    New(TypeRef),
    Call { recv: Option<String>, name: String },
    Access { recv: String, name: String },
}

#[derive(Debug, Clone, Default)]
struct Body {
    locals: Vec<VarDecl>,
    events: Vec<Event>,
}

#[derive(Debug, Clone)]
struct FieldDecl {
    var: VarDecl,
    init: Body,
}

#[derive(Debug, Clone)]
struct MethodDecl {
    name: String,
    params: Vec<VarDecl>,
    body: Body,
}

#[derive(Debug, Clone)]
struct ClassDecl {
    name: String,
    supertypes: Vec<(TypeRef, DependencyKind)>,
    fields: Vec<FieldDecl>,
    methods: Vec<MethodDecl>,
}

#[derive(Debug, Clone)]
struct Import {
    segments: Vec<String>,
    wildcard: bool,
    line: u32,
}

#[derive(Debug, Clone, Default)]
struct FileDecl {
    package: Vec<String>,
    imports: Vec<Import>,
    classes: Vec<ClassDecl>,
}

struct Parser<'a> {
    t: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self, k: usize) -> Option<&'a Tok> {
        self.t.get(self.pos + k).map(|t| &t.tok)
    }

    fn line(&self) -> u32 {
        self.t.get(self.pos).or(self.t.last()).map_or(0, |t| t.line)
    }

    fn ident(&self, k: usize) -> Option<&'a str> {
        match self.peek(k) {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn is(&self, k: usize, c: char) -> bool {
        self.peek(k) == Some(&Tok::Punct(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is(0, c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.t.len()
    }

    /// Skips a balanced group starting at the current opener.
    fn skip_group(&mut self, open: char, close: char) {
        let mut depth = 0usize;
        while let Some(tok) = self.peek(0) {
            self.pos += 1;
            match tok {
                Tok::Punct(c) if *c == open => depth += 1,
                Tok::Punct(c) if *c == close => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return;
                    }
                }
                _ => {}
            }
        }
    }

    /// Skips to just past the next `;` at nesting depth zero, or stops before
    /// an unmatched `}`.
    fn skip_statement(&mut self) {
        while let Some(tok) = self.peek(0) {
            match tok {
                Tok::Punct(';') => {
                    self.pos += 1;
                    return;
                }
                Tok::Punct('{') => self.skip_group('{', '}'),
                Tok::Punct('(') => self.skip_group('(', ')'),
                Tok::Punct('}') => return,
                _ => self.pos += 1,
            }
        }
    }

    fn qualified(&mut self) -> Vec<String> {
        let mut segs = Vec::new();
        while let Some(id) = self.ident(0) {
            segs.push(id.to_string());
            self.pos += 1;
            if self.is(0, '.') && self.ident(1).is_some() {
                self.pos += 1;
            } else {
                break;
            }
        }
        segs
    }

    fn skip_annotations(&mut self) {
        while self.is(0, '@') && self.ident(1).is_some_and(|s| s != "interface") {
            self.pos += 1;
            self.qualified();
            if self.is(0, '(') {
                self.skip_group('(', ')');
            }
        }
    }

    /// Generic arguments, restricted to tokens that can occur in a type so
    /// that comparisons are not mistaken for generics.
    fn try_generic_args(&mut self) -> bool {
        if !self.is(0, '<') {
            return true;
        }
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(tok) = self.peek(0) {
            self.pos += 1;
            match tok {
                Tok::Punct('<') => depth += 1,
                Tok::Punct('>') => {
                    depth -= 1;
                    if depth == 0 {
                        return true;
                    }
                }
                Tok::Punct('.' | ',' | '?' | '[' | ']') | Tok::Ident(_) => {}
                _ => break,
            }
        }
        self.pos = start;
        false
    }

    /// Parses a type reference, leaving the position untouched on failure.
    fn try_type(&mut self) -> Option<TypeRef> {
        let start = self.pos;
        let line = self.line();
        match self.ident(0) {
            Some(s) if !is_keyword(s) || PRIMITIVES.contains(&s) => {}
            _ => return None,
        }
        let segments = self.qualified();
        if !self.try_generic_args() {
            self.pos = start;
            return None;
        }
        while self.is(0, '[') && self.is(1, ']') {
            self.pos += 2;
        }
        if self.is(0, '.') && self.is(1, '.') && self.is(2, '.') {
            self.pos += 3;
        }
        Some(TypeRef { segments, line })
    }

    fn type_list(&mut self) -> Vec<TypeRef> {
        let mut out = Vec::new();
        loop {
            self.skip_annotations();
            match self.try_type() {
                Some(t) => out.push(t),
                None => break,
            }
            if !self.eat(',') {
                break;
            }
        }
        out
    }

    fn file(&mut self) -> FileDecl {
        let mut f = FileDecl::default();
        while !self.at_end() {
            self.skip_annotations();
            match self.ident(0) {
                Some("package") => {
                    self.pos += 1;
                    f.package = self.qualified();
                    self.skip_statement();
                }
                Some("import") => {
                    let line = self.line();
                    self.pos += 1;
                    let is_static = self.ident(0) == Some("static");
                    if is_static {
                        self.pos += 1;
                    }
                    let mut segments = self.qualified();
                    let wildcard = self.is(0, '.') && self.is(1, '*');
                    if is_static && !wildcard {
                        segments.pop();
                    }
                    if !segments.is_empty() {
                        f.imports.push(Import { segments, wildcard: wildcard && !is_static, line });
                    }
                    self.skip_statement();
                }
                Some(_) => {
                    if !self.type_decl(None, &mut f.classes) {
                        self.pos += 1;
                    }
                }
                None => self.pos += 1,
            }
        }
        f
    }

    fn modifiers(&mut self) {
        loop {
            self.skip_annotations();
            match self.ident(0) {
                Some(m) if MODIFIERS.contains(&m) => self.pos += 1,
                Some("non") if self.is(1, '-') && self.ident(2) == Some("sealed") => self.pos += 3,
                _ => return,
            }
        }
    }

    /// Parses a class, interface, enum or record declaration if one starts
    /// here (after modifiers). Nested types are flattened as `Outer.Inner`.
    fn type_decl(&mut self, outer: Option<&str>, out: &mut Vec<ClassDecl>) -> bool {
        let start = self.pos;
        self.modifiers();
        let is_annotation = self.is(0, '@') && self.ident(1) == Some("interface");
        if is_annotation {
            self.pos += 1;
        }
        let flavour = match self.ident(0) {
            Some(k @ ("class" | "interface" | "enum" | "record")) => k,
            _ => {
                self.pos = start;
                return false;
            }
        };
        self.pos += 1;
        let Some(name) = self.ident(0) else {
            self.pos = start;
            return false;
        };
        self.pos += 1;
        let name = match outer {
            Some(o) => format!("{o}.{name}"),
            None => name.to_string(),
        };
        self.try_generic_args();
        if flavour == "record" && self.is(0, '(') {
            self.skip_group('(', ')');
        }
        let mut class = ClassDecl { name: name.clone(), supertypes: Vec::new(), fields: Vec::new(), methods: Vec::new() };
        loop {
            match self.ident(0) {
                Some("extends") => {
                    self.pos += 1;
                    class.supertypes.extend(self.type_list().into_iter().map(|t| (t, DependencyKind::Extends)));
                }
                Some("implements") => {
                    self.pos += 1;
                    class.supertypes.extend(self.type_list().into_iter().map(|t| (t, DependencyKind::Implements)));
                }
                Some("permits") => {
                    self.pos += 1;
                    self.type_list();
                }
                _ => break,
            }
        }
        if !self.eat('{') {
            out.push(class);
            return true;
        }
        if flavour == "enum" {
            self.enum_constants();
        }
        let mut nested = Vec::new();
        self.class_body(&mut class, &mut nested);
        out.push(class);
        out.extend(nested);
        true
    }

    fn enum_constants(&mut self) {
        while let Some(tok) = self.peek(0) {
            match tok {
                Tok::Punct(';') => {
                    self.pos += 1;
                    return;
                }
                Tok::Punct('}') => return,
                Tok::Punct('(') => self.skip_group('(', ')'),
                Tok::Punct('{') => self.skip_group('{', '}'),
                _ => self.pos += 1,
            }
        }
    }

    /// Consumes members up to and including the closing brace.
    fn class_body(&mut self, class: &mut ClassDecl, nested: &mut Vec<ClassDecl>) {
        let simple = class.name.rsplit('.').next().unwrap_or_default().to_string();
        while !self.at_end() {
            if self.eat('}') {
                return;
            }
            if self.eat(';') {
                continue;
            }
            if self.type_decl(Some(&class.name), nested) {
                continue;
            }
            self.modifiers();
            if self.is(0, '{') {
                // initializer block
                self.pos += 1;
                let mut init = MethodDecl { name: "<init>".into(), params: Vec::new(), body: Body::default() };
                self.block(&mut init.body);
                if !init.body.events.is_empty() || !init.body.locals.is_empty() {
                    class.methods.push(init);
                }
                continue;
            }
            if self.is(0, '<') {
                self.skip_group('<', '>');
            }
            // constructor
            if self.ident(0) == Some(simple.as_str()) && self.is(1, '(') {
                self.pos += 1;
                self.method_rest(simple.clone(), class);
                continue;
            }
            let Some(ty) = self.try_type() else {
                self.skip_statement();
                continue;
            };
            let Some(name) = self.ident(0).filter(|s| !is_keyword(s)).map(str::to_string) else {
                self.skip_statement();
                continue;
            };
            self.pos += 1;
            if self.is(0, '(') {
                self.method_rest(name, class);
            } else {
                self.fields(ty, name, class);
            }
        }
    }

    fn method_rest(&mut self, name: String, class: &mut ClassDecl) {
        let params = self.params();
        while self.is(0, '[') {
            self.pos += 1;
        }
        if self.ident(0) == Some("throws") {
            self.pos += 1;
            self.type_list();
        }
        if self.ident(0) == Some("default") {
            self.skip_statement();
            class.methods.push(MethodDecl { name, params, body: Body::default() });
            return;
        }
        let mut body = Body::default();
        if self.eat('{') {
            self.block(&mut body);
        } else {
            self.skip_statement();
        }
        class.methods.push(MethodDecl { name, params, body });
    }

    fn params(&mut self) -> Vec<VarDecl> {
        let mut out = Vec::new();
        if !self.eat('(') {
            return out;
        }
        loop {
            if self.eat(')') || self.at_end() {
                return out;
            }
            self.modifiers();
            match self.try_type() {
                Some(ty) => {
                    if let Some(name) = self.ident(0).filter(|s| !is_keyword(s) || *s == "this") {
                        out.push(VarDecl { name: name.to_string(), ty });
                        self.pos += 1;
                    }
                }
                None => self.pos += 1,
            }
            while !self.is(0, ',') && !self.is(0, ')') && !self.at_end() {
                self.pos += 1;
            }
            self.eat(',');
        }
    }

    fn fields(&mut self, ty: TypeRef, first: String, class: &mut ClassDecl) {
        let mut name = first;
        loop {
            while self.is(0, '[') || self.is(0, ']') {
                self.pos += 1;
            }
            let mut init = Body::default();
            if self.eat('=') {
                self.expression(&mut init);
            }
            class.fields.push(FieldDecl { var: VarDecl { name, ty: ty.clone() }, init });
            if self.eat(',') {
                match self.ident(0) {
                    Some(n) => {
                        name = n.to_string();
                        self.pos += 1;
                    }
                    None => break,
                }
            } else {
                break;
            }
        }
        self.skip_statement();
    }

    /// Scans an initializer up to the next top-level `,` or `;`.
    fn expression(&mut self, body: &mut Body) {
        let mut depth = 0usize;
        while let Some(tok) = self.peek(0) {
            match tok {
                Tok::Punct('(' | '{' | '[') => depth += 1,
                Tok::Punct(')' | '}' | ']') => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                }
                Tok::Punct(',' | ';') if depth == 0 => return,
                _ => {}
            }
            self.scan_token(body);
        }
    }

    /// Scans statements up to and including the matching `}`.
    fn block(&mut self, body: &mut Body) {
        let mut depth = 1usize;
        while let Some(tok) = self.peek(0) {
            match tok {
                Tok::Punct('{') => depth += 1,
                Tok::Punct('}') => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return;
                    }
                }
                _ => {}
            }
            self.scan_token(body);
        }
    }

    fn prev_is(&self, c: char) -> bool {
        self.pos > 0 && self.t[self.pos - 1].tok == Tok::Punct(c)
    }

    /// Records whatever starts at the current token and advances at least
    /// one token.
    fn scan_token(&mut self, body: &mut Body) {
        let Some(Tok::Ident(word)) = self.peek(0) else {
            self.pos += 1;
            return;
        };
        if word == "new" {
            self.pos += 1;
            self.skip_annotations();
            if let Some(ty) = self.try_type() {
                if !ty.is_primitive() {
                    body.events.push(Event::New(ty));
                }
            }
            return;
        }
        // local declaration: Type name followed by = ; , : )
        let starts_statement = self.pos == 0
            || matches!(self.t[self.pos - 1].tok, Tok::Punct('{' | '}' | ';' | '('))
            || matches!(&self.t[self.pos - 1].tok, Tok::Ident(s) if s == "final");
        if starts_statement && (!is_keyword(word) || PRIMITIVES.contains(&word.as_str())) {
            let start = self.pos;
            if let Some(ty) = self.try_type() {
                if let Some(name) = self.ident(0).filter(|s| !is_keyword(s)) {
                    if matches!(self.peek(1), Some(Tok::Punct('=' | ';' | ',' | ':' | ')'))) {
                        body.locals.push(VarDecl { name: name.to_string(), ty });
                        self.pos += 1;
                        return;
                    }
                }
            }
            self.pos = start;
        }
        if is_keyword(word) && word != "this" {
            self.pos += 1;
            return;
        }
        let receiverless = !self.prev_is('.') || (self.pos >= 2 && self.t[self.pos - 2].tok == Tok::Ident("this".into()));
        if word == "this" {
            self.pos += 1;
            return;
        }
        if receiverless {
            if self.is(1, '(') {
                body.events.push(Event::Call { recv: None, name: word.clone() });
            } else if self.is(1, '.') {
                if let Some(member) = self.ident(2) {
                    let event = if self.is(3, '(') {
                        Event::Call { recv: Some(word.clone()), name: member.to_string() }
                    } else {
                        Event::Access { recv: word.clone(), name: member.to_string() }
                    };
                    body.events.push(event);
                    self.pos += 3;
                    return;
                }
            }
        }
        self.pos += 1;
    }
}

fn parse_file(src: &str) -> FileDecl {
    let tokens = lex(src);
    Parser { t: &tokens, pos: 0 }.file()
}

// ---------------------------------------------------------------- resolution

struct ClassInfo {
    path: String,
    fields: HashMap<String, TypeRef>,
    methods: BTreeSet<String>,
    /// Package of the declaring file, dotted.
    package: String,
}

struct Corpus {
    /// Qualified dotted name -> info.
    classes: BTreeMap<String, ClassInfo>,
    /// Dotted package -> simple (possibly `Outer.Inner`) class names.
    packages: BTreeMap<String, BTreeSet<String>>,
}

fn package_path(pkg: &[String]) -> String {
    pkg.join("/")
}

fn qualify(pkg: &str, name: &str) -> String {
    if pkg.is_empty() {
        name.to_string()
    } else {
        format!("{pkg}.{name}")
    }
}

/// Method element path, kept apart from a same-named field.
fn method_path(class: &ClassInfo, name: &str) -> String {
    if class.fields.contains_key(name) {
        format!("{}/{name}()", class.path)
    } else {
        format!("{}/{name}", class.path)
    }
}

struct FileContext<'a> {
    corpus: &'a Corpus,
    file: &'a FileDecl,
    package: String,
    rel: String,
}

impl<'a> FileContext<'a> {
    fn resolve(&self, ty: &TypeRef, log: &mut BTreeSet<String>) -> Option<&'a ClassInfo> {
        if ty.is_primitive() {
            return None;
        }
        let found = self.lookup(ty);
        let external = ty.segments.len() == 1
            && (PLATFORM_TYPES.contains(&ty.simple())
                || self.file.imports.iter().any(|i| !i.wildcard && i.segments.last().map(String::as_str) == Some(ty.simple())));
        if found.is_none() && !external {
            log.insert(format!("{}:{}: unresolved type `{}`", self.rel, ty.line, ty.segments.join(".")));
        }
        found
    }

    fn lookup(&self, ty: &TypeRef) -> Option<&'a ClassInfo> {
        let classes = &self.corpus.classes;
        if ty.segments.len() > 1 {
            let dotted = ty.segments.join(".");
            if let Some(c) = classes.get(&dotted) {
                return Some(c);
            }
            // Outer.Inner referenced by simple outer name
            let head = TypeRef { segments: vec![ty.segments[0].clone()], line: ty.line };
            let outer = self.lookup(&head)?;
            let rest = ty.segments[1..].join(".");
            let inner = format!("{}.{rest}", outer_qualified(outer));
            return classes.get(&inner);
        }
        let name = ty.simple();
        let local = qualify(&self.package, name);
        if self.file.classes.iter().any(|c| c.name == name) {
            return classes.get(&local);
        }
        let nested = format!(".{name}");
        if let Some(c) = self.file.classes.iter().find(|c| c.name.ends_with(&nested)) {
            return classes.get(&qualify(&self.package, &c.name));
        }
        for imp in self.file.imports.iter().filter(|i| !i.wildcard) {
            if imp.segments.last().map(String::as_str) == Some(name) {
                if let Some(c) = classes.get(&imp.segments.join(".")) {
                    return Some(c);
                }
            }
        }
        if let Some(c) = classes.get(&local) {
            return Some(c);
        }
        for imp in self.file.imports.iter().filter(|i| i.wildcard) {
            if let Some(c) = classes.get(&qualify(&imp.segments.join("."), name)) {
                return Some(c);
            }
        }
        None
    }
}

fn outer_qualified(c: &ClassInfo) -> String {
    let name = c.path.rsplit('/').next().unwrap_or_default();
    qualify(&c.package, name)
}

/// Walks `root` for source files and extracts code facts.
pub fn scan_sources(root: &Path, options: &ScanOptions) -> ScanOutput {
    let mut log = BTreeSet::new();
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        match entry {
            Ok(e) if e.file_type().is_file() => {
                let ext = e.path().extension().and_then(|x| x.to_str()).unwrap_or_default();
                if options.extensions.iter().any(|x| x == ext) {
                    files.push(e.into_path());
                }
            }
            Ok(_) => {}
            Err(err) => {
                log.insert(format!("cannot walk {}: {err}", err.path().map_or_else(|| root.display().to_string(), |p| p.display().to_string())));
            }
        }
    }
    let rel = |p: &Path| p.strip_prefix(root).unwrap_or(p).to_string_lossy().replace('\\', "/");

    let parsed: Vec<(String, Result<FileDecl, String>)> = files
        .par_iter()
        .map(|p| {
            let decl = fs::read_to_string(p).map(|s| parse_file(&s)).map_err(|e| e.to_string());
            (rel(p), decl)
        })
        .collect();

    if files.is_empty() {
        log.insert(format!("no source files found under {}", root.display()));
    }

    let mut corpus = Corpus { classes: BTreeMap::new(), packages: BTreeMap::new() };
    let mut good: Vec<(String, FileDecl)> = Vec::new();
    for (path, decl) in parsed {
        match decl {
            Ok(d) => good.push((path, d)),
            Err(e) => {
                log.insert(format!("{path}: skipped, cannot read: {e}"));
            }
        }
    }
    for (_, f) in &good {
        let pkg = f.package.join(".");
        for c in &f.classes {
            let qualified = qualify(&pkg, &c.name);
            if corpus.classes.contains_key(&qualified) {
                continue;
            }
            let base = package_path(&f.package);
            let path = if base.is_empty() { c.name.clone() } else { format!("{base}/{}", c.name) };
            corpus.classes.insert(
                qualified,
                ClassInfo {
                    path,
                    fields: c.fields.iter().map(|fd| (fd.var.name.clone(), fd.var.ty.clone())).collect(),
                    methods: c.methods.iter().map(|m| m.name.clone()).collect(),
                    package: pkg.clone(),
                },
            );
            corpus.packages.entry(pkg.clone()).or_default().insert(c.name.clone());
        }
    }

    let mut elements: BTreeMap<String, CodeElement> = BTreeMap::new();
    let mut deps: BTreeSet<CodeDependency> = BTreeSet::new();
    let add = |elements: &mut BTreeMap<String, CodeElement>, path: String, kind: CodeKind, parent: Option<&str>| {
        elements.entry(path.clone()).or_insert_with(|| CodeElement::new(path, kind, parent));
    };

    for pkg in corpus.packages.keys() {
        let segs: Vec<&str> = if pkg.is_empty() { Vec::new() } else { pkg.split('.').collect() };
        for i in 1..=segs.len() {
            let path = segs[..i].join("/");
            let parent = (i > 1).then(|| segs[..i - 1].join("/"));
            add(&mut elements, path, CodeKind::Package, parent.as_deref());
        }
    }

    let mut unresolved = BTreeSet::new();
    for (rel_path, f) in &good {
        let package = f.package.join(".");
        let ctx = FileContext { corpus: &corpus, file: f, package: package.clone(), rel: rel_path.clone() };
        let pkg_path = package_path(&f.package);
        let top_level: Vec<&ClassInfo> = f
            .classes
            .iter()
            .filter(|c| !c.name.contains('.'))
            .filter_map(|c| corpus.classes.get(&qualify(&package, &c.name)))
            .collect();

        for imp in &f.imports {
            let target = if imp.wildcard {
                let p = imp.segments.join(".");
                corpus.packages.contains_key(&p).then(|| imp.segments.join("/"))
            } else {
                corpus.classes.get(&imp.segments.join(".")).map(|c| c.path.clone())
            };
            match target {
                Some(t) => {
                    for c in &top_level {
                        deps.insert(CodeDependency::new(c.path.clone(), t.clone(), DependencyKind::Import));
                    }
                }
                None => {
                    let suffix = if imp.wildcard { ".*" } else { "" };
                    unresolved.insert(format!("{rel_path}:{}: unresolved import `{}{suffix}`", imp.line, imp.segments.join(".")));
                }
            }
        }

        for c in &f.classes {
            let Some(info) = corpus.classes.get(&qualify(&package, &c.name)) else { continue };
            let parent = (!pkg_path.is_empty()).then_some(pkg_path.as_str());
            add(&mut elements, info.path.clone(), CodeKind::Class, parent);
            for (ty, kind) in &c.supertypes {
                if let Some(t) = ctx.resolve(ty, &mut unresolved) {
                    deps.insert(CodeDependency::new(info.path.clone(), t.path.clone(), *kind));
                }
            }
            let scope_fields = |name: &str| info.fields.get(name);
            for fd in &c.fields {
                let path = format!("{}/{}", info.path, fd.var.name);
                add(&mut elements, path.clone(), CodeKind::Field, Some(&info.path));
                if let Some(t) = ctx.resolve(&fd.var.ty, &mut unresolved) {
                    deps.insert(CodeDependency::new(path.clone(), t.path.clone(), DependencyKind::FieldType));
                }
                emit_events(&ctx, info, &path, &fd.init, &[], &scope_fields, &mut deps, &mut unresolved);
            }
            for m in &c.methods {
                let path = method_path(info, &m.name);
                add(&mut elements, path.clone(), CodeKind::Method, Some(&info.path));
                for v in m.params.iter().chain(m.body.locals.iter()) {
                    let vpath = format!("{path}/{}", v.name);
                    add(&mut elements, vpath.clone(), CodeKind::Variable, Some(&path));
                    if let Some(t) = ctx.resolve(&v.ty, &mut unresolved) {
                        deps.insert(CodeDependency::new(vpath, t.path.clone(), DependencyKind::VariableType));
                    }
                }
                let scope: Vec<&VarDecl> = m.params.iter().chain(m.body.locals.iter()).collect();
                emit_events(&ctx, info, &path, &m.body, &scope, &scope_fields, &mut deps, &mut unresolved);
            }
        }
    }
    log.extend(unresolved);

    let mut facts = CodeFacts { elements: elements.into_values().collect(), dependencies: deps.into_iter().collect() };
    facts.dependencies.retain(|d| d.from != d.to);
    facts.canonicalize();
    ScanOutput { facts, log: log.into_iter().collect() }
}

#[allow(clippy::too_many_arguments)]
fn emit_events<'a>(
    ctx: &FileContext<'a>,
    own: &ClassInfo,
    from: &str,
    body: &Body,
    locals: &[&VarDecl],
    fields: &dyn Fn(&str) -> Option<&'a TypeRef>,
    deps: &mut BTreeSet<CodeDependency>,
    unresolved: &mut BTreeSet<String>,
) {
    let var_type = |name: &str| -> Option<TypeRef> {
        locals.iter().rev().find(|v| v.name == name).map(|v| v.ty.clone()).or_else(|| fields(name).cloned())
    };
    for ev in &body.events {
        match ev {
            Event::New(ty) => {
                if let Some(t) = ctx.resolve(ty, unresolved) {
                    deps.insert(CodeDependency::new(from, t.path.clone(), DependencyKind::ObjectCreation));
                }
            }
            Event::Call { recv: None, name } => {
                if own.methods.contains(name) {
                    deps.insert(CodeDependency::new(from, method_path(own, name), DependencyKind::MethodCall));
                }
            }
            Event::Call { recv: Some(r), name } => {
                let target = match var_type(r) {
                    Some(ty) => ctx.resolve(&ty, unresolved),
                    // a static call through a class name
                    None if r.starts_with(char::is_uppercase) => {
                        ctx.lookup(&TypeRef { segments: vec![r.clone()], line: 0 })
                    }
                    None => None,
                };
                if let Some(t) = target {
                    let to = if t.methods.contains(name) { method_path(t, name) } else { t.path.clone() };
                    deps.insert(CodeDependency::new(from, to, DependencyKind::MethodCall));
                }
            }
            Event::Access { recv, name } => {
                let Some(ty) = var_type(recv) else { continue };
                if let Some(t) = ctx.lookup(&ty) {
                    if t.fields.contains_key(name) {
                        deps.insert(CodeDependency::new(from, format!("{}/{name}", t.path), DependencyKind::FieldAccess));
                    }
                }
            }
        }
    }
}
