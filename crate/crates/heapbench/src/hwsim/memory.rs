//! Banked storage for the simulated heap.
//!
//! Node `i` lives in bank [`bank_of`]`(i, k)`; within bank 0 the root
//! occupies slot 0 and deeper nodes shift down by one. Because sibling
//! indices are consecutive, the k children of any node occupy k distinct
//! banks — the property that lets the hardware fetch them in one
//! transaction.

use super::bank_of;

#[derive(Debug, Clone)]
pub struct BankedHeapMemory {
    arity: usize,
    banks: Vec<Vec<i64>>,
    len: usize,
}

impl BankedHeapMemory {
    pub fn new(arity: usize) -> Self {
        debug_assert!(arity >= 2);
        BankedHeapMemory {
            arity,
            banks: vec![Vec::new(); arity],
            len: 0,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// (bank, slot) address of heap node `i`.
    fn slot(&self, i: usize) -> (usize, usize) {
        let bank = bank_of(i, self.arity);
        if i == 0 {
            (0, 0)
        } else {
            let row = (i - 1) / self.arity;
            // Bank 0 also holds the root, so its rows shift down one slot.
            (bank, if bank == 0 { row + 1 } else { row })
        }
    }

    /// Append a value at heap index `len` (the next free leaf).
    pub fn push(&mut self, value: i64) {
        let (bank, slot) = self.slot(self.len);
        debug_assert_eq!(self.banks[bank].len(), slot, "append must hit the bank tail");
        self.banks[bank].push(value);
        self.len += 1;
    }

    /// Remove and return the value at the highest heap index.
    pub fn pop(&mut self) -> Option<i64> {
        if self.len == 0 {
            return None;
        }
        let (bank, slot) = self.slot(self.len - 1);
        debug_assert_eq!(self.banks[bank].len(), slot + 1);
        let value = self.banks[bank].pop();
        self.len -= 1;
        value
    }

    pub fn read(&self, i: usize) -> i64 {
        assert!(i < self.len, "read of node {i} beyond heap of {}", self.len);
        let (bank, slot) = self.slot(i);
        self.banks[bank][slot]
    }

    pub fn write(&mut self, i: usize, value: i64) {
        assert!(i < self.len, "write of node {i} beyond heap of {}", self.len);
        let (bank, slot) = self.slot(i);
        self.banks[bank][slot] = value;
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        let a = self.read(i);
        let b = self.read(j);
        self.write(i, b);
        self.write(j, a);
    }

    /// One sibling-fetch transaction: the currently present children of
    /// node `i` as `(index, value)` pairs. Touches each bank at most once.
    pub fn read_children(&self, i: usize) -> Vec<(usize, i64)> {
        let first = self.arity * i + 1;
        (first..first + self.arity)
            .take_while(|&c| c < self.len)
            .map(|c| (c, self.read(c)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_read_pop_round_trip() {
        let mut mem = BankedHeapMemory::new(4);
        for v in 0..23 {
            mem.push(v * 10);
        }
        assert_eq!(mem.len(), 23);
        for i in 0..23 {
            assert_eq!(mem.read(i), i as i64 * 10);
        }
        for i in (0..23).rev() {
            assert_eq!(mem.pop(), Some(i as i64 * 10));
        }
        assert!(mem.is_empty());
        assert_eq!(mem.pop(), None);
    }

    #[test]
    fn write_and_swap_address_the_right_nodes() {
        let mut mem = BankedHeapMemory::new(2);
        for v in [5, 3, 4] {
            mem.push(v);
        }
        mem.swap(0, 2);
        assert_eq!(mem.read(0), 4);
        assert_eq!(mem.read(2), 5);
        mem.write(1, -7);
        assert_eq!(mem.read(1), -7);
    }

    #[test]
    fn children_come_back_clipped_to_heap_size() {
        let mut mem = BankedHeapMemory::new(4);
        for v in 0..6 {
            mem.push(v);
        }
        // node 0's children are 1..=4, node 1's are 5..=8 but only 5 exists
        assert_eq!(mem.read_children(0), vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
        assert_eq!(mem.read_children(1), vec![(5, 5)]);
        assert_eq!(mem.read_children(2), vec![]);
    }

    #[test]
    fn bank_occupancy_stays_balanced() {
        // After n pushes the banks hold ceil/floor(n/k)-ish rows each: no
        // bank may exceed any other by more than the root slot plus one row.
        let mut mem = BankedHeapMemory::new(8);
        for v in 0..1000 {
            mem.push(v);
        }
        let sizes: Vec<usize> = mem.banks.iter().map(Vec::len).collect();
        let min = sizes.iter().min().unwrap();
        let max = sizes.iter().max().unwrap();
        assert!(max - min <= 2, "bank sizes {sizes:?}");
        assert_eq!(sizes.iter().sum::<usize>(), 1000);
    }
}
