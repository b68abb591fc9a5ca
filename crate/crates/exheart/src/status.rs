use alloc::string::String;

/// Three-valued answer of a semi-decision procedure.
#[derive(Clone, Debug)]
pub enum Verdict<W> {
    Yes(W),
    No(String),
    /// The bounded search found nothing; the bound is named in the message.
    Unknown(String),
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// `Some(bool)` when determinate.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Yes(_) => Some(true),
            Verdict::No(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Yes(w) => Verdict::Yes(f(w)),
            Verdict::No(r) => Verdict::No(r),
            Verdict::Unknown(r) => Verdict::Unknown(r),
        }
    }

    pub fn forget(&self) -> Verdict<()> {
        match self {
            Verdict::Yes(_) => Verdict::Yes(()),
            Verdict::No(r) => Verdict::No(r.clone()),
            Verdict::Unknown(r) => Verdict::Unknown(r.clone()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Conjunction: `No` dominates `Unknown`, which dominates `Yes`.
pub fn all_of(items: impl IntoIterator<Item = Verdict<()>>) -> Verdict<()> {
    let mut unknown = None;
    for v in items {
        match v {
            Verdict::No(r) => return Verdict::No(r),
            Verdict::Unknown(r) => {
                unknown.get_or_insert(r);
            }
            Verdict::Yes(()) => {}
        }
    }
    match unknown {
        Some(r) => Verdict::Unknown(r),
        None => Verdict::Yes(()),
    }
}
