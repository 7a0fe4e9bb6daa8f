#include "properties.hpp"

#include <gtest/gtest.h>

namespace {

void expectLaw(const char* name) {
    for (const auto& law : props::laws())
        if (std::string(law.name) == name) {
            const auto failure = props::runLaw(law);
            EXPECT_FALSE(failure) << *failure;
            return;
        }
    FAIL() << "no law named " << name;
}

}  // namespace

TEST(Property, ProjectionCommutes) { expectLaw("projection"); }
TEST(Property, RetractionCommutes) { expectLaw("retraction"); }
TEST(Property, TransferRoundTrip) { expectLaw("roundtrip"); }
TEST(Property, InvertRestores) { expectLaw("inverse"); }
TEST(Property, OptimizeDiffIdempotent) { expectLaw("optimizeDiff"); }
TEST(Property, SyncConverges) { expectLaw("syncInto"); }
TEST(Property, ScriptAndFileRoundTrip) { expectLaw("round trips"); }
TEST(Property, TypesAndLinksPreserved) { expectLaw("preservation"); }

TEST(Property, UndoDeleteMatchesScrubbedReplay) {
    const auto failure = props::runLaw(props::undoLaw());
    EXPECT_FALSE(failure) << *failure;
}
