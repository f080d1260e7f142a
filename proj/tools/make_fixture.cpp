// Writes the bundled synthetic fixture corpus to a directory.
#include <iostream>

#include "CLI11.hpp"

#include "fixture/synthetic_fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic fixture corpus", "make_fixture"};
  std::string out = "fixture";
  app.add_option("out", out, "Output directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  const auto p = framesift::fixture::write_synthetic_fixture(out);
  std::cout << "corpus:          " << p.corpus_manifest.string() << "\n"
            << "embeddings:      " << p.embeddings_dir.string() << "\n"
            << "video queries:   " << p.video_queries.string() << "\n"
            << "frame queries:   " << p.frame_queries.string() << "\n"
            << "shot boundaries: " << p.shot_boundaries.string() << "\n";
  return 0;
}
