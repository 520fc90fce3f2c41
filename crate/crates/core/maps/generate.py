"""Regenerates the bundled map fixtures (houseA/B/C.json).

Run from this directory: python3 generate.py
"""
import json

RES = 0.1


class Grid:
    def __init__(self, width_m, height_m):
        self.w = round(width_m / RES)
        self.h = round(height_m / RES)
        self.cells = [[False] * self.w for _ in range(self.h)]

    def fill(self, x0, y0, x1, y1, occupied=True):
        """Marks cells whose centers fall in [x0, x1) x [y0, y1)."""
        for r in range(self.h):
            cy = (r + 0.5) * RES
            if not (y0 <= cy < y1):
                continue
            for c in range(self.w):
                cx = (c + 0.5) * RES
                if x0 <= cx < x1:
                    self.cells[r][c] = occupied

    def border(self, t=0.3):
        wm, hm = self.w * RES, self.h * RES
        self.fill(0, 0, wm, t)
        self.fill(0, hm - t, wm, hm)
        self.fill(0, 0, t, hm)
        self.fill(wm - t, 0, wm, hm)

    def rows(self):
        return ["".join("#" if v else "." for v in row) for row in self.cells]


def write(name, grid, doors, stairs, chairs, path, start):
    doc = {
        "resolution": RES,
        "grid": grid.rows(),
        "doors": doors,
        "stairs": stairs,
        "chairs": chairs,
        "path": path,
        "start": start,
    }
    with open(f"{name}.json", "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def house_a():
    # L-shaped hallway, stairwell openings along the inner side.
    g = Grid(22.0, 16.0)
    g.border()
    # everything left of the right-hand hallway and above the bottom one is solid
    g.fill(0.0, 3.3, 18.7, 16.0)
    stairs = [[8.0, 3.3], [13.0, 3.3], [18.7, 8.0]]
    doors = [[5.0, 0.3], [21.7, 12.0]]
    chairs = [[10.0, 9.0]]
    path = [[1.8, 1.8], [20.2, 1.8], [20.2, 14.5]]
    write("houseA", g, doors, stairs, chairs, path, [1.8, 1.8, 0.0])


def house_b():
    # Room cluster: an open living area with chairs, stairs in a corner.
    g = Grid(20.0, 14.0)
    g.border()
    g.fill(0.3, 6.5, 8.0, 7.0)  # partition with an opening
    g.fill(10.0, 6.5, 19.7, 7.0)
    g.fill(13.0, 7.0, 13.5, 10.5)
    chairs = [[6.0, 2.8], [11.5, 1.0], [16.0, 3.0], [11.0, 9.5]]
    stairs = [[3.5, 1.0], [17.5, 10.0], [6.0, 11.0]]
    doors = [[9.0, 6.75], [13.25, 11.5]]
    path = [[1.5, 3.5], [17.5, 3.5], [17.5, 5.5], [9.0, 5.5], [9.0, 8.5], [2.0, 8.5], [2.0, 12.5]]
    write("houseB", g, doors, stairs, chairs, path, [1.5, 3.5, 0.0])


def house_c():
    # Ring hallway around a block of rooms; doors open onto the inner side and
    # the path hugs that side, so keeping clear of doors costs path tracking.
    g = Grid(26.0, 16.0)
    g.border()
    g.fill(4.3, 4.3, 21.7, 11.7)
    doors = [
        [7.0, 4.3], [11.0, 4.3], [15.0, 4.3], [19.0, 4.3],
        [21.7, 8.0],
        [19.0, 11.7], [15.0, 11.7], [11.0, 11.7], [7.0, 11.7],
        [4.3, 8.0],
    ]
    stairs = [[13.0, 8.0]]
    chairs = [[8.0, 8.0], [18.0, 8.0]]
    path = [[2.0, 3.1], [21.4, 3.1], [22.9, 4.6], [22.9, 11.4], [21.4, 12.9], [4.6, 12.9], [3.1, 11.4], [3.1, 5.5]]
    write("houseC", g, doors, stairs, chairs, path, [2.0, 3.1, 0.0])


if __name__ == "__main__":
    house_a()
    house_b()
    house_c()
