#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "slsito/slsito.h"

TEST(CApi, VersionAndStatus) {
  EXPECT_STREQ(slsito_version(), "0.1.0");
  EXPECT_STRNE(slsito_status_string(SLSITO_CONFIGURATION_ERROR), "");
}

TEST(CApi, ConfigLifecycle) {
  slsito_config* cfg = nullptr;
  ASSERT_EQ(slsito_config_create(&cfg), SLSITO_OK);
  EXPECT_EQ(slsito_config_set(cfg, "function", "CROSS"), SLSITO_OK);
  EXPECT_EQ(slsito_config_set(cfg, "nope", "1"), SLSITO_CONFIGURATION_ERROR);
  EXPECT_NE(std::string(slsito_last_error()).find("nope"), std::string::npos);

  size_t needed = 0;
  char small[2];
  EXPECT_EQ(slsito_config_get(cfg, "function", small, sizeof small, &needed), SLSITO_BUFFER_TOO_SMALL);
  EXPECT_EQ(needed, 6u);
  char buf[64];
  ASSERT_EQ(slsito_config_get(cfg, "function", buf, sizeof buf, &needed), SLSITO_OK);
  EXPECT_STREQ(buf, "CROSS");

  ASSERT_EQ(slsito_config_dump(cfg, nullptr, 0, &needed), SLSITO_BUFFER_TOO_SMALL);
  std::string dump(needed, '\0');
  ASSERT_EQ(slsito_config_dump(cfg, dump.data(), dump.size(), &needed), SLSITO_OK);
  EXPECT_NE(dump.find("function=CROSS"), std::string::npos);

  EXPECT_EQ(slsito_config_load(cfg, "/nonexistent/file.cfg"), SLSITO_CONFIGURATION_ERROR);
  EXPECT_EQ(slsito_config_set(nullptr, "seed", "1"), SLSITO_INVALID_ARGUMENT);
  slsito_config_destroy(cfg);
}

TEST(CApi, RunAndInspect) {
  slsito_config* cfg = nullptr;
  ASSERT_EQ(slsito_config_create(&cfg), SLSITO_OK);
  slsito_config_set(cfg, "kind", "convergence");
  slsito_config_set(cfg, "target", "ito-2d");
  slsito_config_set(cfg, "function", "CROSS");
  slsito_config_set(cfg, "steps", "100,400");
  slsito_config_set(cfg, "paths", "16");
  ASSERT_EQ(slsito_config_validate(cfg), SLSITO_OK);
  slsito_summary* s = nullptr;
  ASSERT_EQ(slsito_run(cfg, &s), SLSITO_OK) << slsito_last_error();
  ASSERT_EQ(slsito_summary_level_count(s), 2u);

  slsito_level_info info;
  ASSERT_EQ(slsito_summary_level(s, 1, &info), SLSITO_OK);
  EXPECT_EQ(info.steps, 400u);
  EXPECT_EQ(info.n_paths, 16u);
  EXPECT_EQ(slsito_summary_level(s, 2, &info), SLSITO_INVALID_ARGUMENT);

  size_t ncol = 0;
  ASSERT_EQ(slsito_summary_column_count(s, 0, &ncol), SLSITO_OK);
  EXPECT_GT(ncol, 10u);
  const char* name = nullptr;
  ASSERT_EQ(slsito_summary_column_name(s, 0, 0, &name), SLSITO_OK);
  EXPECT_STREQ(name, "lhs");

  slsito_moments m;
  ASSERT_EQ(slsito_summary_stat(s, 0, "residual", &m), SLSITO_OK);
  EXPECT_EQ(m.count, 16u);
  EXPECT_EQ(slsito_summary_stat(s, 0, "bogus", &m), SLSITO_CONFIGURATION_ERROR);
  slsito_isometry iso;
  EXPECT_EQ(slsito_summary_isometry(s, 0, &iso), SLSITO_INVALID_ARGUMENT);

  EXPECT_EQ(slsito_summary_convergence_count(s), 2u);
  slsito_convergence_row row;
  ASSERT_EQ(slsito_summary_convergence(s, 0, &row), SLSITO_OK);
  EXPECT_GT(row.decay, 0.0);
  EXPECT_GE(slsito_summary_check_count(s), 1u);
  slsito_check chk;
  ASSERT_EQ(slsito_summary_check(s, 0, &chk), SLSITO_OK);
  EXPECT_NE(chk.name, nullptr);
  slsito_summary_destroy(s);
  slsito_config_destroy(cfg);
}

TEST(CApi, RunReportsConfigurationErrors) {
  slsito_config* cfg = nullptr;
  ASSERT_EQ(slsito_config_create(&cfg), SLSITO_OK);
  slsito_config_set(cfg, "function", "NOT_A_FUNCTION");
  slsito_config_set(cfg, "steps", "10");
  slsito_config_set(cfg, "paths", "2");
  slsito_summary* s = nullptr;
  EXPECT_EQ(slsito_run(cfg, &s), SLSITO_CONFIGURATION_ERROR);
  EXPECT_EQ(s, nullptr);
  EXPECT_EQ(slsito_run(cfg, nullptr), SLSITO_INVALID_ARGUMENT);
  slsito_config_destroy(cfg);
}

TEST(CApi, CatalogAndMollifier) {
  ASSERT_GE(slsito_catalog_size(), 6u);
  slsito_catalog_info info;
  bool found = false;
  for (size_t i = 0; i < slsito_catalog_size(); ++i) {
    ASSERT_EQ(slsito_catalog_entry(i, &info), SLSITO_OK);
    found |= std::strcmp(info.id, "TANAKA2") == 0;
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(slsito_catalog_entry(1000, &info), SLSITO_INVALID_ARGUMENT);
  EXPECT_EQ(slsito_isometry_pair_count(), 3u);
  const char* id = nullptr;
  const char* desc = nullptr;
  ASSERT_EQ(slsito_isometry_pair(0, &id, &desc), SLSITO_OK);
  EXPECT_STREQ(id, "ISO_UNIT");
  EXPECT_NEAR(slsito_mollifier_constant(), 2.2522836210435810105, 1e-13);
  double v = 0.0;
  ASSERT_EQ(slsito_mollifier_value(2.0, 0.5, &v), SLSITO_OK);
  EXPECT_NEAR(v, 2.0 * 0.82856883986910515166, 1e-13);
  EXPECT_EQ(slsito_mollifier_value(0.5, 0.5, &v), SLSITO_INVALID_ARGUMENT);
}
