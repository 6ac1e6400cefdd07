#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hkm/bicluster.hpp"
#include "hkm/clustering.hpp"
#include "hkm/expression.hpp"
#include "hkm/fom.hpp"
#include "hkm/search.hpp"

namespace hkm {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Six significant digits, as printed in hit tables.
std::string format_evalue(double v);

// `geneId<TAB>clusterNumber` per gene in matrix order. Clusters are numbered
// from 1; unassigned genes (outliers, zero variance) get 0.
void write_cluster_tsv(std::ostream& out, const std::vector<std::string>& gene_ids, const Clustering& clustering);

struct ClusterRow {
    std::string gene_id;
    int cluster = 0;
};
std::vector<ClusterRow> read_cluster_tsv(std::istream& in);

// Header `k,fom`, one row per k.
void write_fom_csv(std::ostream& out, const FomCurve& curve);

// JSON array of {"rows": [geneId...], "cols": [conditionId...], "residue": x}.
void write_bicluster_json(std::ostream& out, const ExpressionMatrix& m, const std::vector<Bicluster>& biclusters);

// queryId subjectId score evalue qStart qEnd sStart sEnd, optionally followed
// by a three-line alignment block prefixed with '#'.
void write_hits_tsv(std::ostream& out, const std::vector<Hit>& hits, bool show_alignment);

// Replaces `path` with `content` via a temporary file and rename, so a failed
// run never leaves a partial file behind.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace hkm
