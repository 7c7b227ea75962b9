/// Binary max-heap of variables keyed by an external activity array.
#[derive(Clone, Debug, Default)]
pub(crate) struct VarHeap {
    heap: Vec<u32>,
    // position of each variable in `heap`, or usize::MAX when absent
    index: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    pub fn grow(&mut self, num_vars: usize) {
        if self.index.len() < num_vars {
            self.index.resize(num_vars, ABSENT);
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.index.get(v as usize).is_some_and(|&i| i != ABSENT)
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn insert(&mut self, v: u32, activity: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.index[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, activity);
    }

    /// Restores the heap property after `v`'s activity increased.
    pub fn increased(&mut self, v: u32, activity: &[f64]) {
        if let Some(&i) = self.index.get(v as usize) {
            if i != ABSENT {
                self.sift_up(i, activity);
            }
        }
    }

    pub fn pop(&mut self, activity: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.index[top as usize] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top)
    }

    fn better(a: u32, b: u32, activity: &[f64]) -> bool {
        let (x, y) = (activity[a as usize], activity[b as usize]);
        // ties go to the lower index for determinism
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::better(v, p, activity) {
                break;
            }
            self.heap[i] = p;
            self.index[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::better(self.heap[right], self.heap[left], activity) {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if !Self::better(c, v, activity) {
                break;
            }
            self.heap[i] = c;
            self.index[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_activity_order() {
        let activity = vec![0.5, 3.0, 1.0, 3.0, 0.0];
        let mut h = VarHeap::default();
        h.grow(5);
        for v in 0..5 {
            h.insert(v, &activity);
        }
        let order: Vec<u32> = std::iter::from_fn(|| h.pop(&activity)).collect();
        assert_eq!(order, vec![1, 3, 2, 0, 4]);
        assert!(h.is_empty());
    }

    #[test]
    fn increase_reorders() {
        let mut activity = vec![1.0, 2.0, 3.0];
        let mut h = VarHeap::default();
        h.grow(3);
        for v in 0..3 {
            h.insert(v, &activity);
        }
        activity[0] = 10.0;
        h.increased(0, &activity);
        assert_eq!(h.pop(&activity), Some(0));
        assert!(!h.contains(0));
        assert!(h.contains(1));
    }
}
