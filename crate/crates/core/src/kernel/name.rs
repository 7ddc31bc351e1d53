//! Names: demand-driven, memoized infinite sequences of naturals.

use std::cell::RefCell;
use std::fmt;
use std::io::BufRead;
use std::rc::Rc;
use std::str::FromStr;

use super::code::Nat;
use super::fuel::{Meter, Stall};

/// Produces the cells of a name in index order.
///
/// `produce` is only ever called with `index` equal to the number of cells
/// already produced. An implementation that returns a [`Stall`] must leave its
/// state so that a later call with the same index can resume.
pub trait Source {
    fn produce(&mut self, index: usize, meter: &mut Meter) -> Result<Nat, Stall>;
}

impl<F> Source for F
where
    F: FnMut(usize, &mut Meter) -> Result<Nat, Stall>,
{
    fn produce(&mut self, index: usize, meter: &mut Meter) -> Result<Nat, Stall> {
        self(index, meter)
    }
}

struct Inner {
    cells: Vec<Nat>,
    source: Box<dyn Source>,
}

/// An element of Baire space, evaluated on demand.
///
/// Cloning a `Name` shares the memo table; a name is meant to have a single
/// consumer at a time.
#[derive(Clone)]
pub struct Name {
    inner: Rc<RefCell<Inner>>,
}

impl Name {
    pub fn from_source<S: Source + 'static>(source: S) -> Name {
        Name {
            inner: Rc::new(RefCell::new(Inner {
                cells: Vec::new(),
                source: Box::new(source),
            })),
        }
    }

    /// The name `i ↦ g(i)`.
    pub fn from_function<G>(g: G) -> Name
    where
        G: Fn(usize) -> Nat + 'static,
    {
        Name::from_source(move |i: usize, _: &mut Meter| Ok(g(i)))
    }

    pub fn constant(value: Nat) -> Name {
        Name::from_function(move |_| value.clone())
    }

    /// A finite prefix. Reading past its end stalls with
    /// [`Stall::EndOfInput`].
    pub fn from_prefix(cells: Vec<Nat>) -> Name {
        Name::from_source(move |i: usize, _: &mut Meter| {
            cells.get(i).cloned().ok_or(Stall::EndOfInput)
        })
    }

    /// Reads the textual name format lazily: one decimal natural per line.
    /// Blank lines are skipped.
    pub fn from_reader<R: BufRead + 'static>(reader: R) -> Name {
        let mut lines = reader.lines();
        let mut line_no = 0usize;
        Name::from_source(move |_: usize, _: &mut Meter| loop {
            line_no += 1;
            match lines.next() {
                None => return Err(Stall::EndOfInput),
                Some(Err(e)) => return Err(Stall::BadInput(e.to_string())),
                Some(Ok(line)) => {
                    let t = line.trim();
                    if t.is_empty() {
                        continue;
                    }
                    return Nat::from_str(t).map_err(|_| {
                        Stall::BadInput(format!("line {line_no}: {t:?} is not a natural"))
                    });
                }
            }
        })
    }

    /// Cell `i`, charging one step for the read plus whatever producing the
    /// missing cells costs.
    pub fn try_at(&self, i: usize, meter: &mut Meter) -> Result<Nat, Stall> {
        meter.tick()?;
        let mut inner = self.inner.borrow_mut();
        while inner.cells.len() <= i {
            let next = inner.cells.len();
            let cell = inner.source.produce(next, meter)?;
            inner.cells.push(cell);
        }
        Ok(inner.cells[i].clone())
    }

    /// Cell `i` with no fuel bound. Panics if the name stalls; only use this
    /// on names known to be total.
    pub fn at(&self, i: usize) -> Nat {
        self.try_at(i, &mut Meter::unbounded())
            .unwrap_or_else(|stall| panic!("name cell {i} unavailable: {stall}"))
    }

    pub fn try_prefix(&self, k: usize, meter: &mut Meter) -> Result<Vec<Nat>, Stall> {
        (0..k).map(|i| self.try_at(i, meter)).collect()
    }

    pub fn prefix(&self, k: usize) -> Vec<Nat> {
        (0..k).map(|i| self.at(i)).collect()
    }

    /// Takes as many cells as possible up to `k`, returning them together with
    /// the reason evaluation stopped early, if it did.
    pub fn partial_prefix(&self, k: usize, meter: &mut Meter) -> (Vec<Nat>, Option<Stall>) {
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            match self.try_at(i, meter) {
                Ok(c) => out.push(c),
                Err(s) => return (out, Some(s)),
            }
        }
        (out, None)
    }

    /// Number of cells evaluated so far.
    pub fn evaluated_len(&self) -> usize {
        self.inner.borrow().cells.len()
    }

    /// Cellwise image `i ↦ f(self(i))`.
    pub fn map<F>(&self, f: F) -> Name
    where
        F: Fn(&Nat) -> Nat + 'static,
    {
        let input = self.clone();
        Name::from_source(move |i: usize, meter: &mut Meter| Ok(f(&input.try_at(i, meter)?)))
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self.inner.borrow();
        f.debug_struct("Name")
            .field("evaluated", &inner.cells.len())
            .finish()
    }
}

/// Renders a prefix in the textual name format.
pub fn format_prefix(cells: &[Nat]) -> String {
    let mut s = String::new();
    for c in cells {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}

/// Parses the textual name format.
pub fn parse_prefix(text: &str) -> Result<Vec<Nat>, Stall> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            Nat::from_str(l.trim())
                .map_err(|_| Stall::BadInput(format!("line {}: {:?} is not a natural", i + 1, l)))
        })
        .collect()
}
