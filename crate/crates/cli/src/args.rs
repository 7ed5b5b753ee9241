use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kklab", version, about = "Exact subgraph counting and threshold experiments for G(n,p)")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// key = value file supplying defaults for any flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Decimal digits in enclosures (at least 4)
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: u32,
    #[arg(long, global = true)]
    pub node_budget: Option<u64>,
    #[arg(long, global = true)]
    pub copy_cap: Option<usize>,
    #[arg(long, global = true)]
    pub exact_edge_cap: Option<usize>,
    #[arg(long, global = true)]
    pub heuristic_vertices: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Clique,
    Cycle,
    Path,
    Graph,
}

#[derive(Debug, Args)]
pub struct HostArg {
    /// Host graph: file (graph6 or edge list), `-` for stdin, or `g6:<string>`
    #[arg(long)]
    pub graph: String,
}

#[derive(Debug, Args)]
pub struct PatternArg {
    /// Pattern: K<r>, C<k>, P<m> (m edges), S<k> (star), clique:r, cycle:k,
    /// path:m, star:k, g6:<string>, or a graph file
    #[arg(long)]
    pub pattern: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count copies of a pattern
    Count {
        #[command(flatten)]
        host: HostArg,
        #[arg(long, value_enum)]
        family: Option<FamilyName>,
        #[arg(long)]
        param: Option<usize>,
        /// Explicit pattern (required with --family graph, or instead of --family)
        #[arg(long)]
        pattern: Option<String>,
        /// Count labeled copies (injective homomorphisms)
        #[arg(long)]
        labeled: bool,
        /// Use the generic backtracking counter
        #[arg(long)]
        generic: bool,
    },
    /// Maximum number of paths of a given length between a vertex pair
    Gamma {
        #[command(flatten)]
        host: HostArg,
        #[arg(long)]
        len: usize,
    },
    /// Maximum number of edge-disjoint copies
    Pack {
        #[command(flatten)]
        host: HostArg,
        #[command(flatten)]
        pattern: PatternArg,
        /// Greedy lower bound instead of the exact search
        #[arg(long)]
        greedy: bool,
    },
    /// Density and maximum subgraph density
    Density {
        #[command(flatten)]
        host: HostArg,
    },
    /// Automorphism group order and canonical form
    Aut {
        #[command(flatten)]
        host: HostArg,
    },
    /// Least q at which the host is q-sparse
    Qmin {
        #[command(flatten)]
        host: HostArg,
        #[arg(long)]
        n: usize,
        /// Include the per-profile threshold table
        #[arg(long)]
        table: bool,
        /// Connected subgraphs up to --heuristic-vertices only (lower bound)
        #[arg(long)]
        heuristic: bool,
    },
    /// Expectation threshold p_E
    Pe {
        #[command(flatten)]
        host: HostArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        heuristic: bool,
    },
    /// Check q-sparseness, reporting a violating subgraph
    SparseCheck {
        #[command(flatten)]
        host: HostArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
    },
    /// Expected number of copies in G(n,p)
    Expect {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
    },
    /// Least L with N(H,F) <= E_{Lq} X_F
    RequiredL {
        #[command(flatten)]
        host: HostArg,
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
    },
    /// Machine checks on concrete inputs
    #[command(subcommand)]
    Verify(Verify),
    /// Peel the copy hypergraph to minimum degree a
    Peel {
        #[command(flatten)]
        host: HostArg,
        #[command(flatten)]
        pattern: PatternArg,
        /// Threshold a directly
        #[arg(long)]
        a: Option<String>,
        /// Or a = E_p X_F / n
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<String>,
    },
    /// Largest l with (nq)^l < n^(1 - delta c), nq = n^c
    Ellhat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        delta: String,
    },
    /// Monte Carlo estimate of the containment threshold p_c
    Pc {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u32,
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a certified q-sparse instance
    Gen {
        /// gnp-repair, clique-union, theta, spider or path-power
        #[arg(long)]
        family: String,
        /// Comma-separated family parameters (random when omitted)
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        repair_budget: usize,
    },
    /// Simulated annealing for hosts with large required L
    Search {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 10000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        host_cap: usize,
        #[arg(long, default_value_t = 2)]
        chains: usize,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Include every accepted state in the report
        #[arg(long)]
        trace: bool,
    },
    /// Exact maximizer of required L over all small hosts
    Sweep {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 6)]
        v_cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Degree, density and edge bounds for a q-sparse host; packing with --pattern
    Props {
        #[command(flatten)]
        host: HostArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        /// Also check the packing bound for this pattern
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Fit decomposition of one copy, or the partition identity over all copies
    Fit {
        #[command(flatten)]
        host: HostArg,
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        d: String,
        /// Comma-separated host vertices, one per pattern vertex
        #[arg(long)]
        copy: Option<String>,
    },
    /// Count legal degree sequences
    Legal {
        /// Comma-separated child counts f_0..f_j
        #[arg(long)]
        f: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        d: String,
        /// Sum D of the big entries
        #[arg(long)]
        big_sum: usize,
        /// Cap on big entries (default: max degree of --graph)
        #[arg(long)]
        d_cap: Option<usize>,
        #[arg(long)]
        graph: Option<String>,
    },
    /// N(H,F) < L^{e_F} E_q X_F
    Main {
        #[command(flatten)]
        host: HostArg,
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        l: Option<String>,
        /// Comparison probability p = L q, instead of --l
        #[arg(long)]
        p: Option<String>,
    },
}
