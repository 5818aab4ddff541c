//! Deliberate faults for checking that the verification suite notices broken constructions.
//!
//! Mutations are scoped to the current thread through [`with_mutations`].

use serde::{Deserialize, Serialize};
use std::cell::Cell;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutations {
    /// Use `+` instead of `(-1)^{|c|}` in the tensor differential.
    pub drop_tensor_sign: bool,
    /// Leave out the `ε(c)·(⊤ - ⊥)` term of the suspension differential.
    pub drop_suspension_augmentation: bool,
    /// Leave the values of one parent clause (1..=7) at zero.
    pub drop_parent_clause: Option<u8>,
}

impl Mutations {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_active(&self) -> bool {
        *self != Self::default()
    }
}

thread_local! {
    static CURRENT: Cell<Mutations> = Cell::new(Mutations::default());
}

pub fn current() -> Mutations {
    CURRENT.with(|c| c.get())
}

/// Runs `f` with the given mutations enabled on this thread.
pub fn with_mutations<R>(m: Mutations, f: impl FnOnce() -> R) -> R {
    struct Restore(Mutations);
    impl Drop for Restore {
        fn drop(&mut self) {
            CURRENT.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(CURRENT.with(|c| c.replace(m)));
    f()
}
