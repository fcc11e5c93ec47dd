//! Suffix array by prefix doubling plus Kasai LCP.

/// Suffix array of an integer text.
#[derive(Debug, Clone)]
pub struct SuffixArray {
    /// Suffix start positions in lexicographic order.
    pub sa: Vec<usize>,
    /// Inverse of `sa`.
    pub rank: Vec<usize>,
    /// `lcp[i]` is the longest common prefix of suffixes `sa[i-1]` and `sa[i]`; `lcp[0] = 0`.
    pub lcp: Vec<usize>,
}

impl SuffixArray {
    pub fn new(text: &[u32]) -> Self {
        let n = text.len();
        if n == 0 {
            return SuffixArray { sa: vec![], rank: vec![], lcp: vec![] };
        }
        let mut sa: Vec<usize> = (0..n).collect();
        let mut rank: Vec<usize> = text.iter().map(|&c| c as usize).collect();
        let mut tmp = vec![0usize; n];
        let mut k = 1;
        loop {
            let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
            sa.sort_unstable_by_key(|&i| key(i));
            tmp[sa[0]] = 0;
            for w in 1..n {
                tmp[sa[w]] = tmp[sa[w - 1]] + usize::from(key(sa[w - 1]) != key(sa[w]));
            }
            std::mem::swap(&mut rank, &mut tmp);
            if rank[sa[n - 1]] == n - 1 || k >= n {
                break;
            }
            k *= 2;
        }
        let lcp = kasai(text, &sa, &rank);
        SuffixArray { sa, rank, lcp }
    }
}

fn kasai(text: &[u32], sa: &[usize], rank: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}
