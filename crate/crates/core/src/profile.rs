//! Binary on/off action profiles and their base-2 index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest user count for which the `2^n` profiles are enumerated.
pub const MAX_USERS: usize = 16;

/// A joint on/off decision for `n` transmitters.
///
/// Bit `i` of `index` is user `i`'s action, so user 0 is the least
/// significant bit and index 0 is the all-silent profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionProfile {
    users: usize,
    index: usize,
}

impl ActionProfile {
    pub fn from_index(users: usize, index: usize) -> Result<Self> {
        check_users(users)?;
        if index >= 1 << users {
            return Err(Error::invalid(format!("profile index {index} out of range for {users} users")));
        }
        Ok(Self { users, index })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_users(bits.len())?;
        let index = bits.iter().enumerate().filter(|(_, &on)| on).fold(0, |acc, (i, _)| acc | (1 << i));
        Ok(Self { users: bits.len(), index })
    }

    pub fn silent(users: usize) -> Result<Self> {
        Self::from_index(users, 0)
    }

    pub fn all_on(users: usize) -> Result<Self> {
        check_users(users)?;
        Ok(Self { users, index: (1 << users) - 1 })
    }

    /// Profile where only `user` transmits.
    pub fn single(users: usize, user: usize) -> Result<Self> {
        if user >= users {
            return Err(Error::invalid(format!("user {user} out of range for {users} users")));
        }
        Self::from_index(users, 1 << user)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_on(&self, user: usize) -> bool {
        self.index >> user & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.users).map(|i| self.is_on(i)).collect()
    }

    /// Same profile with `user`'s action replaced.
    pub fn with(&self, user: usize, on: bool) -> Self {
        let index = if on { self.index | (1 << user) } else { self.index & !(1 << user) };
        Self { users: self.users, index }
    }

    pub fn active_count(&self) -> u32 {
        self.index.count_ones()
    }

    /// Every profile for `users` transmitters, in index order.
    pub fn all(users: usize) -> Result<impl Iterator<Item = ActionProfile>> {
        check_users(users)?;
        Ok((0..1usize << users).map(move |index| ActionProfile { users, index }))
    }
}

impl fmt::Display for ActionProfile {
    /// Bits in user order, user 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.users {
            f.write_str(if self.is_on(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub(crate) fn check_users(users: usize) -> Result<()> {
    if users > MAX_USERS {
        return Err(Error::Capacity { users, limit: MAX_USERS });
    }
    if users == 0 {
        return Err(Error::invalid("profile needs at least one user"));
    }
    Ok(())
}
