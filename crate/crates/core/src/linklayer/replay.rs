use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplayVerdict {
    Accept,
    Reject,
}

/// Highest accepted counter per source address.
///
/// Counter 0 is never issued, so an unseen source behaves as if its
/// highest accepted counter were 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayState {
    highest: BTreeMap<u16, u32>,
}

impl ReplayState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn last_accepted(&self, src: u16) -> u32 {
        self.highest.get(&src).copied().unwrap_or(0)
    }

    /// Accepts iff `ctr` is strictly above the stored maximum for `src`;
    /// gaps are allowed.
    pub fn check_update(&mut self, src: u16, ctr: u32) -> ReplayVerdict {
        if ctr <= self.last_accepted(src) {
            return ReplayVerdict::Reject;
        }
        self.highest.insert(src, ctr);
        ReplayVerdict::Accept
    }

    pub fn would_accept(&self, src: u16, ctr: u32) -> bool {
        ctr > self.last_accepted(src)
    }

    /// Records `ctr` as the maximum without checking; used when restoring
    /// persisted state.
    pub fn set_last_accepted(&mut self, src: u16, ctr: u32) {
        self.highest.insert(src, ctr);
    }

    pub fn entries(&self) -> impl Iterator<Item = (u16, u32)> + '_ {
        self.highest.iter().map(|(&s, &c)| (s, c))
    }
}

pub fn replay_check_update(replay: &mut ReplayState, src: u16, ctr: u32) -> ReplayVerdict {
    replay.check_update(src, ctr)
}
