// Published-value bands on the standard SBM preset. These are statistical
// reproductions; see README for the seeds where they are known to miss.
#include "rjdbase/baselines.hpp"
#include "rjdbase/eval.hpp"
#include "rjdbase/rjd.hpp"
#include "rjdbase/sbm.hpp"

#include <doctest.h>

using namespace rjdbase;

namespace {

const sbm::MultimodalDataset& preset() {
  static const auto data = sbm::generate(sbm::SbmConfig::standard_preset(0));
  return data;
}

}  // namespace

TEST_CASE("MVSC with J=5 lands in [0.64, 0.80]") {
  const auto& d = preset();
  const auto e = baselines::mvsc(d.affinities, 6, 5);
  const double v = nmi(kmeans(e.columns, 6).labels, d.labels);
  MESSAGE("MVSC NMI " << v);
  CHECK(v >= 0.64);
  CHECK(v <= 0.80);
}

TEST_CASE("CoReg with lambda=0.5, J=5 lands in [0.59, 0.78]") {
  const auto& d = preset();
  const auto e = baselines::coreg_mvsc(d.laplacians, 6, 0.5, 5);
  const double v = nmi(kmeans(e.columns, 6).labels, d.labels);
  MESSAGE("CoReg NMI " << v);
  CHECK(v >= 0.59);
  CHECK(v <= 0.78);
}

TEST_CASE("trial landscape: mean in [0.65, 0.77], std <= 0.05") {
  const auto& d = preset();
  const auto r = rjd_base(d.laplacians, RjdOptions{200, 6, 0});
  const auto s = landscape_stats(r, d.labels, 6);
  MESSAGE("mean " << s.mean_nmi << ", std " << s.std_nmi);
  CHECK(s.mean_nmi >= 0.65);
  CHECK(s.mean_nmi <= 0.77);
  CHECK(s.std_nmi <= 0.05);
}
