#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "cocoa_abm/io.hpp"

using namespace cocoa_abm;
namespace fs = std::filesystem;

TEST_CASE("format_double drops trailing noise") {
  CHECK(format_double(0.2) == "0.2");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(100.0) == "100");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-1.5) == "-1.5");
  CHECK(format_double(0.0001171875) == "0.0001171875");
}

TEST_CASE("split_csv_line keeps empty fields") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
  CHECK(split_csv_line("1,") == std::vector<std::string>{"1", ""});
}

TEST_CASE("atomic write then read round trips") {
  const fs::path dir = fs::temp_directory_path() / "cocoa_abm_io_test";
  fs::create_directories(dir);
  const fs::path file = dir / "data.txt";
  write_file_atomic(file, "line one\nline two\n");
  CHECK(read_file(file) == "line one\nline two\n");
  write_file_atomic(file, "replaced");
  CHECK(read_file(file) == "replaced");
  CHECK_FALSE(fs::exists(dir / "data.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("read_file throws on a missing path") {
  CHECK_THROWS(read_file("/nonexistent/por/favor.txt"));
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(fnv1a64("x") != fnv1a64("y"));
}
