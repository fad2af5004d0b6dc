//! Certificate checks built on the simulation game: language inclusion
//! into a good-for-games automaton, and joint GFG-ness plus equivalence.
//!
//! GFG-ness of the reference automaton is trusted, not checked. When it
//! does not hold the answers are still sound in one direction (a verifier
//! win always implies inclusion) but may report spurious failures.

use crate::automaton::ParityAutomaton;
use crate::error::{Error, Result};
use crate::sim::{build_arena, verifier_wins};

/// Whether verifier wins the "`p2_gfg` simulates `p1`" game. For a
/// good-for-games `p2_gfg` this is exactly `L(p1) ⊆ L(p2_gfg)`.
pub fn includes(p1: &ParityAutomaton, p2_gfg: &ParityAutomaton) -> Result<bool> {
    Ok(verifier_wins(&build_arena(p1, p2_gfg)?))
}

/// Whether `candidate` is good-for-games and language equivalent to the
/// good-for-games `reference`.
///
/// Runs the inclusion game first and only plays the reverse game
/// ("`candidate` simulates `reference`") when inclusion holds.
pub fn gfg_equivalent(candidate: &ParityAutomaton, reference_gfg: &ParityAutomaton) -> Result<bool> {
    candidate.check_same_alphabet(reference_gfg)?;
    if !includes(candidate, reference_gfg)? {
        return Ok(false);
    }
    includes(reference_gfg, candidate)
}

/// [`gfg_equivalent`] against a reference whose GFG-ness is checkable
/// because it is deterministic.
pub fn is_gfg_with_reference(p: &ParityAutomaton, deterministic: &ParityAutomaton) -> Result<bool> {
    if !deterministic.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    gfg_equivalent(p, deterministic)
}
