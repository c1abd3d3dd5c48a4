# Copyright (c) 2026 sfd-utils developers, All rights reserved.
#
# This file is part of sfd-utils. sfd-utils provides space-filling
# designs, surrogate models and a benchmark harness for computer
# experiments.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""sfd-utils package."""

__author__ = """sfd-utils developers"""
__email__ = 'sfd-utils-dev@lists.example.org'
__version__ = '0.1.0'
