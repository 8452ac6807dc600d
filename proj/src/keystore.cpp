/*
 * Copyright 2026 The kapre Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "kapre/codec.hpp"
#include "kapre/errors.hpp"

namespace kapre::codec {
namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const fs::path& path, const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + path.string());
}

void require_name(std::string_view name) {
  if (!Keystore::valid_name(name)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid name '" + std::string(name) + "' (expected [A-Za-z0-9_]{1,64})");
  }
}

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

void write_all(int fd, ByteView data, const fs::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error(path, std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open");
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) io_error(path, "read failed");
  return out;
}

void write_file_atomic(const fs::path& path, ByteView data, bool secret) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) io_error(path.parent_path(), "cannot create directory");
  }

  std::random_device rd;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(rd());
  const mode_t mode = secret ? 0600 : 0644;
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, mode);
  if (fd < 0) io_error(tmp, std::string("cannot create: ") + std::strerror(errno));
  try {
    // 0600 regardless of umask.
    if (secret && ::fchmod(fd, 0600) != 0) io_error(tmp, "fchmod failed");
    write_all(fd, data, tmp);
    if (::fsync(fd) != 0) io_error(tmp, "fsync failed");
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    ::unlink(tmp.c_str());
    io_error(path, std::string("rename failed: ") + std::strerror(errno));
  }
}

Keystore::Keystore(fs::path root) : root_(std::move(root)) {}

bool Keystore::valid_name(std::string_view name) {
  if (name.empty() || name.size() > 64) return false;
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

fs::path Keystore::params_path() const { return root_ / "params.kpar"; }

fs::path Keystore::user_dir(std::string_view user) const {
  require_name(user);
  return root_ / "users" / std::string(user);
}

fs::path Keystore::public_key_path(std::string_view user) const {
  return user_dir(user) / "key.kpub";
}

fs::path Keystore::secret_key_path(std::string_view user) const {
  return user_dir(user) / "key.ksec";
}

fs::path Keystore::grant_path(std::string_view from, std::string_view to) const {
  require_name(from);
  require_name(to);
  return root_ / "grants" / (std::string(from) + "-" + std::string(to) + ".krk");
}

bool Keystore::has_params() const { return fs::exists(params_path()); }

bool Keystore::has_user(std::string_view user) const {
  return fs::exists(public_key_path(user)) || fs::exists(secret_key_path(user));
}

bool Keystore::has_grant(std::string_view from, std::string_view to) const {
  return fs::exists(grant_path(from, to));
}

void Keystore::write_params(const Params& par, bool overwrite) {
  if (!overwrite && has_params()) {
    throw Error(ErrorCode::kIo, "params already exist: " + params_path().string());
  }
  write_file_atomic(params_path(), bytes_of(armor(encode(par))));
}

void Keystore::write_user(std::string_view user, const KeyPair& kp,
                          const Fingerprint& params) {
  if (has_user(user)) {
    throw Error(ErrorCode::kIo, "user already exists: " + std::string(user));
  }
  write_file_atomic(secret_key_path(user),
                    bytes_of(armor(encode(SecretKeyFile{params, kp.sk}))), true);
  write_file_atomic(public_key_path(user),
                    bytes_of(armor(encode(PublicKeyFile{params, kp.pk}))));
}

void Keystore::write_grant(std::string_view from, std::string_view to,
                           const GrantFile& grant) {
  write_file_atomic(grant_path(from, to), bytes_of(armor(encode(grant))));
}

Params Keystore::read_params() const {
  return decode_params(unwrap(read_file(params_path())));
}

PublicKeyFile Keystore::read_public_key(std::string_view user) const {
  return decode_public_key(unwrap(read_file(public_key_path(user))));
}

SecretKeyFile Keystore::read_secret_key(std::string_view user) const {
  return decode_secret_key(unwrap(read_file(secret_key_path(user))));
}

GrantFile Keystore::read_grant(std::string_view from, std::string_view to) const {
  return decode_grant(unwrap(read_file(grant_path(from, to))));
}

}  // namespace kapre::codec
