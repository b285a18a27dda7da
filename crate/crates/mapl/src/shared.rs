use std::collections::HashMap;
use std::sync::{Arc, PoisonError, RwLock};

use mapl_core::primes::{ApPrefix, ClassKey, PrefixSource, PrimeTable};

/// Thread-safe [`PrefixSource`]: class prefixes are built on first use and
/// shared afterwards.
#[derive(Debug)]
pub struct SharedPrefixCache {
    table: Arc<PrimeTable>,
    map: RwLock<HashMap<ClassKey, Arc<ApPrefix>>>,
}

impl SharedPrefixCache {
    pub fn new(table: Arc<PrimeTable>) -> Self {
        Self {
            table,
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn shared_table(&self) -> &Arc<PrimeTable> {
        &self.table
    }

    pub fn cached(&self) -> usize {
        self.map.read().unwrap_or_else(PoisonError::into_inner).len()
    }
}

impl PrefixSource for SharedPrefixCache {
    fn table(&self) -> &PrimeTable {
        &self.table
    }

    fn prefix(&self, key: ClassKey) -> mapl_core::Result<Arc<ApPrefix>> {
        if let Some(p) = self.map.read().unwrap_or_else(PoisonError::into_inner).get(&key) {
            return Ok(p.clone());
        }
        // two threads may race to build the same class; the first insert wins
        let built = Arc::new(ApPrefix::build(&self.table, key)?);
        let mut map = self.map.write().unwrap_or_else(PoisonError::into_inner);
        Ok(map.entry(key).or_insert(built).clone())
    }
}
