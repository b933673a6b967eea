# SPDX-FileCopyrightText: 2025-present Keisuke Magara <197999578+keimag-maru@users.noreply.github.com>
#
# SPDX-License-Identifier: MIT
