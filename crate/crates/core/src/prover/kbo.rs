//! Knuth–Bendix order with unit weights and precedence `▷ > a_n > … > a_1`.

use serde::{Deserialize, Serialize};

use super::term::{Node, Term, TermBank, TermId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KboResult {
    Greater,
    Less,
    Equal,
    Incomparable,
}

/// Checks `|s|_x >= |t|_x` for every variable `x`, returning the pair
/// (s dominates t, t dominates s).
fn var_dominance(s: &[(u32, u32)], t: &[(u32, u32)]) -> (bool, bool) {
    let (mut s_ge, mut t_ge) = (true, true);
    let (mut i, mut j) = (0, 0);
    while i < s.len() || j < t.len() {
        if j == t.len() || (i < s.len() && s[i].0 < t[j].0) {
            t_ge = false;
            i += 1;
        } else if i == s.len() || t[j].0 < s[i].0 {
            s_ge = false;
            j += 1;
        } else {
            if s[i].1 < t[j].1 {
                s_ge = false;
            }
            if t[j].1 < s[i].1 {
                t_ge = false;
            }
            i += 1;
            j += 1;
        }
        if !s_ge && !t_ge {
            break;
        }
    }
    (s_ge, t_ge)
}

pub fn kbo(bank: &TermBank, s: TermId, t: TermId) -> KboResult {
    if s == t {
        return KboResult::Equal;
    }
    let (s_ge, t_ge) = var_dominance(bank.vars(s), bank.vars(t));
    if !s_ge && !t_ge {
        return KboResult::Incomparable;
    }
    let (ws, wt) = (bank.size(s), bank.size(t));
    if ws > wt {
        return if s_ge { KboResult::Greater } else { KboResult::Incomparable };
    }
    if ws < wt {
        return if t_ge { KboResult::Less } else { KboResult::Incomparable };
    }
    match (bank.node(s), bank.node(t)) {
        (Node::Const(a), Node::Const(b)) => {
            if a > b {
                KboResult::Greater
            } else {
                KboResult::Less
            }
        }
        (Node::App(s1, s2), Node::App(t1, t2)) => {
            let r = if s1 != t1 { kbo(bank, s1, t1) } else { kbo(bank, s2, t2) };
            match r {
                KboResult::Greater if s_ge => KboResult::Greater,
                KboResult::Less if t_ge => KboResult::Less,
                _ => KboResult::Incomparable,
            }
        }
        // Equal weight with a variable on either side: distinct variables,
        // or a variable against a constant.
        _ => KboResult::Incomparable,
    }
}

/// Compares two tree terms.
pub fn kbo_compare(s: &Term, t: &Term) -> KboResult {
    let mut bank = TermBank::new();
    let (a, b) = (bank.from_tree(s), bank.from_tree(t));
    kbo(&bank, a, b)
}
